# -*- coding: utf-8 -*-`

#  This library is free software; you can redistribute it and/or
#  modify it under the terms of the GNU Lesser General Public
#  License as published by the Free Software Foundation; either
#  version 3.0 of the License, or (at your option) any later version.
#
#  This library is distributed in the hope that it will be useful,
#  but WITHOUT ANY WARRANTY; without even the implied warranty of
#  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
#  Lesser General Public License for more details.

from collections import defaultdict
from dataclasses import dataclass
from itertools import product

from helpers import KHError, logger_global, ones_below, state_string
from kh_apis.complex_KH_API import labelled_entries, sparse_matrix
from kh_apis.diagram_KH_API import ComponentError, ResolutionError, resolution_circles


class StateGuardError(KHError):
    pass


@dataclass(frozen=True)
class CubeGenerator:
    """
    A resolution state together with a + or - on each of its circles. Circles
    are ordered by their smallest arc label, free loops last.
    """
    state: tuple
    labeling: str

    @property
    def homological_degree(self):
        return sum(self.state)

    @property
    def quantum_degree(self):
        return self.labeling.count('+') - self.labeling.count('-') + sum(self.state)

    @property
    def label(self):
        return f"{state_string(self.state)}:{self.labeling}"


@dataclass(frozen=True)
class CrossingSplit:
    k: int
    c0: object
    c1: object
    d01: tuple
    lower_left: tuple

    def is_upper_triangular(self):
        return not self.lower_left

    def lower_left_block(self):
        return self.lower_left

    def reassembles(self, full):
        pieces = dict(labelled_entries(self.c0))
        pieces.update(labelled_entries(self.c1))
        pieces.update({(source, target): value for source, target, value in self.d01})
        return pieces == labelled_entries(full)


def _multiply(x, y):
    if x == '-' and y == '-':
        return None
    return '-' if '-' in (x, y) else '+'


def _comultiply(x):
    return [('+', '-'), ('-', '+')] if x == '+' else [('-', '-')]


def frobenius_entries(circles_s, circles_t, loops):
    """
    The function lists the unsigned m or Delta entries of one cube edge.

    Parameters
    ----------
    circles_s, circles_t : tuple, obligatory
        circles (frozensets of arcs) of the source and target resolutions
    loops : int, obligatory
        free loops, identical on both ends

    Returns
    ------
    list
        (source labeling, target labeling, coefficient)
    """
    owner_t = {arc: n for n, circle in enumerate(circles_t) for arc in circle}
    owner_s = {arc: n for n, circle in enumerate(circles_s) for arc in circle}
    ns, nt = len(circles_s), len(circles_t)
    free_s = [(ns + l, nt + l) for l in range(loops)]
    entries = []
    if nt == ns - 1:
        image = [owner_t[min(circle)] for circle in circles_s]
        merged = [n for n in range(ns) if image.count(image[n]) == 2]
        a, b = merged
        for labeling in product('+-', repeat=ns + loops):
            value = _multiply(labeling[a], labeling[b])
            if value is None:
                continue
            target = [''] * (nt + loops)
            for n in range(ns):
                target[image[n]] = labeling[n]
            target[image[a]] = value
            for s, t in free_s:
                target[t] = labeling[s]
            entries.append((''.join(labeling), ''.join(target), 1))
    elif nt == ns + 1:
        preimage = [owner_s[min(circle)] for circle in circles_t]
        split = [n for n in range(nt) if preimage.count(preimage[n]) == 2]
        x, y = split
        for labeling in product('+-', repeat=ns + loops):
            for vx, vy in _comultiply(labeling[preimage[x]]):
                target = [labeling[preimage[n]] for n in range(nt)]
                target[x], target[y] = vx, vy
                target += [labeling[s] for s, _ in free_s]
                entries.append((''.join(labeling), ''.join(target), 1))
    else:
        raise ResolutionError(f"an edge changes the circle count from {ns} to {nt}")
    return entries


class KhovanovAPI:
    """
    Mixin Khovanov API class: the cube of resolutions with the Frobenius maps.

    Methods
    -------
    cube_generators(d)
        returns list of CubeGenerator
    edge_map(d, state, i)
        returns DomainMatrix, the signed edge block
    build_ckh(d, allow_links)
        returns ChainComplex
    crossing_split(d, k)
        returns CrossingSplit
    """

    def __check_guard(self, d):
        states = 2 ** d.crossing_count
        if states > self.KH_CONFIG.get_max_states():
            logger_global.error(f"{d.name or 'diagram'} has {states} states, guard is {self.KH_CONFIG.get_max_states()}")
            raise StateGuardError(f"{states} cube states exceed the guard of {self.KH_CONFIG.get_max_states()}")

    def cube_generators(self, d):
        self.__check_guard(d)
        generators = []
        for state in product((0, 1), repeat=d.crossing_count):
            count = len(resolution_circles(d.crossings, state)) + d.loops
            generators += [CubeGenerator(state, ''.join(labeling)) for labeling in product('+-', repeat=count)]
        return generators

    def edge_map(self, d, state, i):
        """
        The method returns the signed m or Delta block of the cube edge leaving
        `state` in direction i, rows indexed by the target labelings and columns
        by the source labelings (both in +/- lexicographic order).

        Raises
        ------
        ResolutionError
            if bit i of the state is already 1
        """
        state = tuple(state)
        d.check_index(i)
        if len(state) != d.crossing_count or state[i] != 0:
            raise ResolutionError(f"no cube edge leaves state {state_string(state)} in direction {i}")
        target = state[:i] + (1,) + state[i + 1:]
        circles_s, circles_t = resolution_circles(d.crossings, state), resolution_circles(d.crossings, target)
        sign = (-1) ** ones_below(state, i)
        columns = {''.join(l): n for n, l in enumerate(product('+-', repeat=len(circles_s) + d.loops))}
        rows = {''.join(l): n for n, l in enumerate(product('+-', repeat=len(circles_t) + d.loops))}
        entries = defaultdict(int)
        for source, image, value in frobenius_entries(circles_s, circles_t, d.loops):
            entries[(rows[image], columns[source])] += sign * value
        return sparse_matrix(entries, (len(rows), len(columns)))

    def build_ckh(self, d, allow_links=False):
        """
        The method builds the Khovanov complex of a diagram. Generator (s, L)
        sits in raw degree (|s|, #+ - #- + |s|); the recorded offsets are
        shift_h = -n_minus and shift_q = n_plus - 2 n_minus.

        Parameters
        ----------
        d : KnotDiagram, obligatory
        allow_links : bool, optional
            accept diagrams with several components

        Raises
        ------
        ComponentError
            for a link unless allow_links
        StateGuardError
            if 2^n exceeds MAX_STATES

        Returns
        ------
        ChainComplex
        """
        if not d.is_knot and not allow_links:
            logger_global.error(f"build_ckh called on a {d.component_count}-component diagram")
            raise ComponentError(f"Khovanov complexes are built for knots, got {d.component_count} components")
        self.__check_guard(d)
        n = d.crossing_count
        states = list(product((0, 1), repeat=n))
        circles = {state: resolution_circles(d.crossings, state) for state in states}

        generators = defaultdict(list)
        for state in states:
            for labeling in product('+-', repeat=len(circles[state]) + d.loops):
                g = CubeGenerator(state, ''.join(labeling))
                generators[(g.homological_degree, g.quantum_degree)].append(g.label)

        entries = []
        for state in states:
            for i in range(n):
                if state[i]:
                    continue
                target = state[:i] + (1,) + state[i + 1:]
                sign = (-1) ** ones_below(state, i)
                for source, image, value in frobenius_entries(circles[state], circles[target], d.loops):
                    entries.append((f"{state_string(state)}:{source}", f"{state_string(target)}:{image}", sign * value))

        c = self.build_from_entries(dict(generators), entries, -d.n_minus, d.n_plus - 2 * d.n_minus)
        logger_global.info(f"Built CKh of {d.name or 'diagram'}: {n} crossings, {c.total_rank()} generators.")
        return c

    def crossing_split(self, d, k):
        """
        The method splits CKh(d) along crossing k into the subcomplexes of states
        with bit k = 0 and bit k = 1 and the connecting block from the first to
        the second.

        Raises
        ------
        CrossingIndexError

        Returns
        ------
        CrossingSplit
        """
        d.check_index(k)
        full = self.build_ckh(d, allow_links=True)

        def bit(label):
            return int(label[k])

        parts = {0: {}, 1: {}}
        for degree, labels in full.generators.items():
            for b in (0, 1):
                chosen = tuple(label for label in labels if bit(label) == b)
                if chosen:
                    parts[b][degree] = chosen
        inner = {0: [], 1: []}
        d01, lower_left = [], []
        for (source, target), value in labelled_entries(full).items():
            if bit(source) == bit(target):
                inner[bit(source)].append((source, target, value))
            elif bit(source) == 0:
                d01.append((source, target, value))
            else:
                lower_left.append((source, target, value))
        c0 = self.build_from_entries(parts[0], inner[0], full.shift_h, full.shift_q)
        c1 = self.build_from_entries(parts[1], inner[1], full.shift_h, full.shift_q)
        logger_global.info(f"Split CKh of {d.name or 'diagram'} at crossing {k}.")
        return CrossingSplit(k, c0, c1, tuple(sorted(d01)), tuple(sorted(lower_left)))
