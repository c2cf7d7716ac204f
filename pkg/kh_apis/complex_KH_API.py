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

import math
from dataclasses import dataclass, field
from itertools import combinations

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors
from sympy.polys.matrices import DomainMatrix

from helpers import CheckFailure, KHError, logger_global
from kh_apis.polynomial_KH_API import LaurentPoly


class ComplexError(KHError):
    pass


class ShapeMismatchError(ComplexError):
    pass


class QuantumDegreeError(ComplexError):
    pass


class DSquaredError(CheckFailure):
    def __init__(self, message, degree):
        super().__init__(message)
        self.degree = degree


class ChainMapError(CheckFailure):
    def __init__(self, message, degree):
        super().__init__(message)
        self.degree = degree


class CubeFaceError(CheckFailure):
    def __init__(self, message, face):
        super().__init__(message)
        self.face = face


def sparse_matrix(entries, shape):
    """
    The function builds a sparse DomainMatrix over ZZ from a dictionary of keys.

    Parameters
    ----------
    entries : dict, obligatory
        (row, column) -> int, zero values are dropped
    shape : tuple, obligatory
        (rows, columns)

    Returns
    ------
    DomainMatrix
    """
    rows = {}
    for (r, c), value in entries.items():
        if value:
            rows.setdefault(r, {})[c] = ZZ(int(value))
    return DomainMatrix(rows, shape, ZZ)


def matrix_entries(m):
    return {key: int(value) for key, value in m.to_dok().items() if value}


def is_zero_matrix(m):
    return not matrix_entries(m)


def as_matrix(value, shape, what):
    if isinstance(value, DomainMatrix):
        if value.shape != shape:
            raise ShapeMismatchError(f"{what}: expected shape {shape}, got {value.shape}")
        return value
    rows = [list(row) for row in value]
    if len(rows) != shape[0] or any(len(row) != shape[1] for row in rows):
        raise ShapeMismatchError(f"{what}: expected shape {shape}")
    return sparse_matrix({(r, c): v for r, row in enumerate(rows) for c, v in enumerate(row)}, shape)


def divisibility_chain(factors):
    chain = sorted(abs(int(f)) for f in factors if f)
    for a, b in combinations(range(len(chain)), 2):
        x, y = chain[a], chain[b]
        chain[a], chain[b] = math.gcd(x, y), x * y // math.gcd(x, y)
    return tuple(sorted(f for f in chain if f > 1))


def eliminate(entries, modulus=None):
    """
    The function reduces a sparse integer matrix by pivoting on unit entries,
    picking the pivot with the smallest fill-in estimate. Over Z/2 every
    nonzero entry is a unit, so the reduction is complete.

    Parameters
    ----------
    entries : dict, obligatory
        (row, column) -> int
    modulus : int, optional
        2 for Z/2 coefficients, None for Z

    Returns
    ------
    tuple
        (number of unit pivots, residual entries without unit entries)
    """
    rows, cols = {}, {}
    for (r, c), value in entries.items():
        value = value % modulus if modulus else value
        if value:
            rows.setdefault(r, {})[c] = value
            cols.setdefault(c, set()).add(r)

    def is_unit(value):
        return value % modulus != 0 if modulus else abs(value) == 1

    rank = 0
    while True:
        pivot, best = None, None
        for r, row in rows.items():
            for c, value in row.items():
                if is_unit(value):
                    cost = (len(row) - 1) * (len(cols[c]) - 1)
                    if best is None or cost < best:
                        pivot, best = (r, c), cost
        if pivot is None:
            break
        pr, pc = pivot
        unit = rows[pr][pc]
        pivot_row = rows.pop(pr)
        for c in pivot_row:
            cols[c].discard(pr)
        for r in list(cols[pc]):
            factor = rows[r][pc] * unit
            row = rows[r]
            for c, value in pivot_row.items():
                new = row.get(c, 0) - factor * value
                if modulus:
                    new %= modulus
                if new:
                    row[c] = new
                    cols[c].add(r)
                else:
                    row.pop(c, None)
                    cols[c].discard(r)
            if not row:
                del rows[r]
        for c in list(pivot_row):
            if not cols[c]:
                del cols[c]
        rank += 1
    residual = {(r, c): value for r, row in rows.items() for c, value in row.items()}
    return rank, residual


def rank_and_torsion(entries, modulus=None):
    rank, residual = eliminate(entries, modulus)
    if not residual:
        return rank, ()
    row_index = {r: n for n, r in enumerate(sorted({r for r, _ in residual}))}
    col_index = {c: n for n, c in enumerate(sorted({c for _, c in residual}))}
    dense = Matrix.zeros(len(row_index), len(col_index))
    for (r, c), value in residual.items():
        dense[row_index[r], col_index[c]] = value
    factors = [f for f in invariant_factors(dense, domain=ZZ) if f != 0]
    return rank + len(factors), divisibility_chain(factors)


@dataclass(eq=False)
class ChainComplex:
    """
    Bigraded complex of free abelian groups.

    generators maps a raw bidegree (i, j) to its ordered labels, differentials
    maps (i, j) to the matrix from (i, j) to (i + 1, j), rows indexed by the
    target. The effective bidegree of raw (i, j) is (i + shift_h, j + shift_q).
    """
    generators: dict
    differentials: dict
    shift_h: int = 0
    shift_q: int = 0
    _index: dict = field(default=None, repr=False)

    def effective(self, degree):
        return degree[0] + self.shift_h, degree[1] + self.shift_q

    def raw(self, degree):
        return degree[0] - self.shift_h, degree[1] - self.shift_q

    def degrees(self):
        return sorted(self.effective(degree) for degree, labels in self.generators.items() if labels)

    def labels_at(self, i, j):
        return self.generators.get(self.raw((i, j)), ())

    def size_at(self, i, j):
        return len(self.labels_at(i, j))

    def differential_at(self, i, j):
        m = self.differentials.get(self.raw((i, j)))
        if m is None:
            return DomainMatrix.zeros((self.size_at(i + 1, j), self.size_at(i, j)), ZZ)
        return m

    def total_rank(self):
        return sum(len(labels) for labels in self.generators.values())

    def index_of(self, label):
        """
        Returns the effective bidegree and the position of a generator label.
        """
        if self._index is None:
            self._index = {label: (self.effective(degree), n)
                           for degree, labels in self.generators.items() for n, label in enumerate(labels)}
        if label not in self._index:
            raise ComplexError(f"unknown generator label {label}")
        return self._index[label]

    def stripped(self):
        return ChainComplex(self.generators, self.differentials, 0, 0)

    def normalized(self):
        return ChainComplex({self.effective(d): labels for d, labels in self.generators.items()},
                            {self.effective(d): m for d, m in self.differentials.items()}, 0, 0)


def labelled_entries(c):
    """
    Returns the differential of a complex as {(source label, target label): value}.
    """
    entries = {}
    for (i, j), m in c.differentials.items():
        sources, targets = c.generators[(i, j)], c.generators.get((i + 1, j), ())
        for (r, col), value in matrix_entries(m).items():
            entries[(sources[col], targets[r])] = value
    return entries


@dataclass(eq=False)
class ChainMap:
    """
    Degree-preserving map of complexes, blocks keyed by the effective
    bidegree, each block target x source.
    """
    source: ChainComplex
    target: ChainComplex
    blocks: dict

    def block_at(self, i, j):
        m = self.blocks.get((i, j))
        if m is None:
            return DomainMatrix.zeros((self.target.size_at(i, j), self.source.size_at(i, j)), ZZ)
        return m


@dataclass(frozen=True)
class BigradedGroups:
    """
    Homology per effective bidegree as rows (i, j, free rank, torsion), empty
    bidegrees omitted.
    """
    rows: tuple
    coefficients: str = 'Z'

    def is_zero(self):
        return not self.rows

    def rank(self, i, j):
        return next((row[2] for row in self.rows if row[:2] == (i, j)), 0)

    def torsion(self, i, j):
        return next((row[3] for row in self.rows if row[:2] == (i, j)), ())

    def shifted(self, dh, dq):
        return BigradedGroups(tuple((i + dh, j + dq, r, t) for i, j, r, t in self.rows), self.coefficients)

    def euler_characteristic(self):
        return sum((LaurentPoly.monomial(j, (-1) ** i * r) for i, j, r, _ in self.rows), LaurentPoly.zero())

    def to_records(self):
        return [{'i': i, 'j': j, 'rank': r, 'torsion': ','.join(str(t) for t in torsion) or '-'}
                for i, j, r, torsion in self.rows]

    def __str__(self):
        if not self.rows:
            return '0'
        parts = []
        for i, j, r, torsion in self.rows:
            summands = ([f"{self.coefficients}^{r}" if r > 1 else self.coefficients] if r else [])
            summands += [f"Z/{t}" for t in torsion]
            parts.append(f"({i},{j}): {' + '.join(summands)}")
        return '; '.join(parts)


class ComplexAPI:
    """
    Mixin complex API class: exact bigraded complexes over the integers.

    Methods
    -------
    build(generators, differentials, shift_h, shift_q)
        returns ChainComplex
    build_from_entries(generators, entries, shift_h, shift_q)
        returns ChainComplex
    build_chain_map(source, target, blocks)
        returns ChainMap
    shift(c, dh, dq)
        returns ChainComplex
    cone(f)
        returns ChainComplex
    cone_inclusion(f), cone_projection(f)
        return ChainMap
    cone_map(f, f2, g_x, g_y)
        returns ChainMap
    cube_total(vertices, edges, order)
        returns ChainComplex
    homology(c, coefficients)
        returns BigradedGroups
    euler_characteristic(c)
        returns LaurentPoly
    is_acyclic(c)
        returns bool
    verify_contraction(c, H)
        returns bool
    identity_map(c), zero_map(source, target), compose(g, f)
        return ChainMap
    dump_complex(c)
        returns str
    """

    def build(self, generators, differentials, shift_h=0, shift_q=0):
        """
        The method validates and builds a chain complex.

        Parameters
        ----------
        generators : dict, obligatory
            raw (i, j) -> sequence of unique labels
        differentials : dict, obligatory
            raw (i, j) -> matrix (DomainMatrix or list of rows) from (i, j) to
            (i + 1, j); an int key i takes a whole-degree matrix over all
            degree-i generators (ordered by j) which must preserve j
        shift_h, shift_q : int, optional
            recorded offsets

        Raises
        ------
        ShapeMismatchError
            if a matrix does not fit its degrees
        QuantumDegreeError
            if a whole-degree matrix changes the quantum degree
        DSquaredError
            if d o d is not zero, reports the effective degree

        Returns
        ------
        ChainComplex
        """
        gens = {tuple(degree): tuple(labels) for degree, labels in generators.items() if labels}
        for labels in gens.values():
            if len(set(labels)) != len(labels):
                raise ComplexError(f"duplicate generator labels in {labels}")

        def size(degree):
            return len(gens.get(degree, ()))

        blocks = {}
        for key, value in differentials.items():
            parts = self.__split_by_quantum(gens, key, value) if isinstance(key, int) else {tuple(key): value}
            for degree, m in parts.items():
                i, j = degree
                shape = (size((i + 1, j)), size(degree))
                m = as_matrix(m, shape, f"differential at {degree}")
                if not is_zero_matrix(m):
                    blocks[degree] = m
        c = ChainComplex(gens, blocks, shift_h, shift_q)
        for (i, j), m in blocks.items():
            after = blocks.get((i + 1, j))
            if after is not None and not is_zero_matrix(after * m):
                effective = c.effective((i, j))
                logger_global.error(f"d o d is not zero at {effective}")
                raise DSquaredError(f"d o d is not zero at degree {effective}", effective)
        return c

    @staticmethod
    def __split_by_quantum(gens, i, value):
        sources = [(j, n) for (d, j) in sorted(gens) if d == i for n in range(len(gens[(d, j)]))]
        targets = [(j, n) for (d, j) in sorted(gens) if d == i + 1 for n in range(len(gens[(d, j)]))]
        m = as_matrix(value, (len(targets), len(sources)), f"differential at degree {i}")
        parts = {}
        for (r, c), v in matrix_entries(m).items():
            (jt, nt), (js, ns) = targets[r], sources[c]
            if jt != js:
                raise QuantumDegreeError(f"differential at degree {i} maps quantum degree {js} to {jt}")
            parts.setdefault((i, js), {})[(nt, ns)] = v
        return {(i, j): sparse_matrix(entries, (len(gens[(i + 1, j)]), len(gens[(i, j)])))
                for (i, j), entries in parts.items()}

    def build_from_entries(self, generators, entries, shift_h=0, shift_q=0):
        """
        The method builds a complex from label-addressed matrix entries
        (source label, target label, coefficient).
        """
        index = {}
        for degree, labels in generators.items():
            for n, label in enumerate(labels):
                if label in index:
                    raise ComplexError(f"duplicate generator label {label}")
                index[label] = (tuple(degree), n)
        blocks = {}
        for source, target, coefficient in entries:
            if source not in index or target not in index:
                raise ComplexError(f"entry {source} -> {target} names an unknown generator")
            (si, sj), sn = index[source]
            (ti, tj), tn = index[target]
            if tj != sj:
                raise QuantumDegreeError(f"entry {source} -> {target} changes the quantum degree")
            if ti != si + 1:
                raise ComplexError(f"entry {source} -> {target} does not raise the homological degree by one")
            block = blocks.setdefault((si, sj), {})
            block[(tn, sn)] = block.get((tn, sn), 0) + coefficient
        differentials = {(i, j): sparse_matrix(block, (len(generators.get((i + 1, j), ())),
                                                       len(generators[(i, j)])))
                         for (i, j), block in blocks.items()}
        return self.build(generators, differentials, shift_h, shift_q)

    def build_chain_map(self, source, target, blocks):
        """
        The method validates a family of blocks as a chain map.

        Raises
        ------
        ShapeMismatchError
            if a block does not fit
        ChainMapError
            if d_target f != f d_source in some effective degree
        """
        checked = {}
        for (i, j), value in blocks.items():
            m = as_matrix(value, (target.size_at(i, j), source.size_at(i, j)), f"chain map block at {(i, j)}")
            if not is_zero_matrix(m):
                checked[(i, j)] = m
        f = ChainMap(source, target, checked)
        for i, j in sorted(set(source.degrees()) | set(target.degrees())):
            left = target.differential_at(i, j) * f.block_at(i, j)
            right = f.block_at(i + 1, j) * source.differential_at(i, j)
            if not is_zero_matrix(left - right):
                logger_global.error(f"chain map identity fails at {(i, j)}")
                raise ChainMapError(f"d f != f d at degree {(i, j)}", (i, j))
        return f

    def identity_map(self, c):
        blocks = {(i, j): DomainMatrix.eye(c.size_at(i, j), ZZ).to_sparse() for i, j in c.degrees()}
        return ChainMap(c, c, blocks)

    def zero_map(self, source, target):
        return ChainMap(source, target, {})

    def compose(self, g, f):
        """
        Returns g o f.
        """
        blocks = {}
        for degree, m in f.blocks.items():
            if degree in g.blocks:
                product = g.blocks[degree] * m
                if not is_zero_matrix(product):
                    blocks[degree] = product
        return ChainMap(f.source, g.target, blocks)

    def shift(self, c, dh, dq):
        """
        The method applies [dh]{dq}: (X[1])^i = X^(i+1), with the differential
        negated once per odd homological shift.
        """
        differentials = c.differentials
        if dh % 2:
            differentials = {degree: -m for degree, m in differentials.items()}
        return ChainComplex(c.generators, differentials, c.shift_h - dh, c.shift_q + dq)

    def cone(self, f):
        """
        The method builds Cone(f)^i = X^(i+1) + Y^i with the differential
        [[-d_X, 0], [f, d_Y]]. Source labels get the prefix 'src:', target
        labels 'tgt:'. The result carries its degrees as raw degrees.

        Raises
        ------
        ChainMapError
            if f is not a chain map
        """
        f = self.build_chain_map(f.source, f.target, f.blocks)
        x, y = f.source, f.target
        degrees = {(i - 1, j) for i, j in x.degrees()} | set(y.degrees())
        generators = {(i, j): tuple(f"src:{label}" for label in x.labels_at(i + 1, j)) +
                      tuple(f"tgt:{label}" for label in y.labels_at(i, j)) for i, j in degrees}
        differentials = {}
        for i, j in degrees:
            sx, sy = x.size_at(i + 1, j), y.size_at(i, j)
            tx = x.size_at(i + 2, j)
            entries = {}
            for (r, col), v in matrix_entries(x.differential_at(i + 1, j)).items():
                entries[(r, col)] = -v
            for (r, col), v in matrix_entries(f.block_at(i + 1, j)).items():
                entries[(tx + r, col)] = v
            for (r, col), v in matrix_entries(y.differential_at(i, j)).items():
                entries[(tx + r, sx + col)] = v
            if entries:
                differentials[(i, j)] = sparse_matrix(entries, (tx + y.size_at(i + 1, j), sx + sy))
        return self.build(generators, differentials)

    def cone_inclusion(self, f, cone=None):
        """
        The method returns the inclusion Y -> Cone(f), y -> (0, y).
        """
        cone = cone if cone is not None else self.cone(f)
        x, y = f.source, f.target
        blocks = {}
        for i, j in y.degrees():
            sx = x.size_at(i + 1, j)
            entries = {(sx + r, r): 1 for r in range(y.size_at(i, j))}
            blocks[(i, j)] = sparse_matrix(entries, (cone.size_at(i, j), y.size_at(i, j)))
        return self.build_chain_map(y, cone, blocks)

    def cone_projection(self, f, cone=None):
        """
        The method returns the projection Cone(f) -> X[1], (x, y) -> x. Together
        with f and the inclusion it closes the triangle X -> Y -> Cone(f) -> X[1].
        """
        cone = cone if cone is not None else self.cone(f)
        x_shifted = self.shift(f.source, 1, 0)
        blocks = {}
        for i, j in cone.degrees():
            sx = x_shifted.size_at(i, j)
            if sx:
                entries = {(r, r): 1 for r in range(sx)}
                blocks[(i, j)] = sparse_matrix(entries, (sx, cone.size_at(i, j)))
        return self.build_chain_map(cone, x_shifted, blocks)

    def cone_map(self, f, f2, g_x, g_y, source=None, target=None):
        """
        The method returns the map Cone(f) -> Cone(f2) induced by g_x, g_y with
        f2 g_x = g_y f, block diagonal diag(g_x at i + 1, g_y at i).
        """
        source = source if source is not None else self.cone(f)
        target = target if target is not None else self.cone(f2)
        blocks = {}
        for i, j in source.degrees():
            entries = {}
            for (r, col), v in matrix_entries(g_x.block_at(i + 1, j)).items():
                entries[(r, col)] = v
            tx, sx = f2.source.size_at(i + 1, j), f.source.size_at(i + 1, j)
            for (r, col), v in matrix_entries(g_y.block_at(i, j)).items():
                entries[(tx + r, sx + col)] = v
            if entries:
                blocks[(i, j)] = sparse_matrix(entries, (target.size_at(i, j), source.size_at(i, j)))
        return self.build_chain_map(source, target, blocks)

    def cube_total(self, vertices, edges, order=None):
        """
        The method folds a commutative cube of complexes into its total complex,
        one direction at a time, each fold taking the cone along that direction.

        Parameters
        ----------
        vertices : dict, obligatory
            bit tuple v -> ChainComplex
        edges : dict, obligatory
            (v, r) with v[r] == 0 -> ChainMap from vertices[v] to vertices[v + e_r]
        order : sequence, optional
            the folding order of the directions, default 0, 1, ...

        Raises
        ------
        CubeFaceError
            if a square face does not commute, reports (v, r, s)

        Returns
        ------
        ChainComplex
        """
        if not vertices:
            raise ComplexError("a cube needs at least one vertex")
        n = len(next(iter(vertices)))
        order = tuple(range(n)) if order is None else tuple(order)
        if sorted(order) != list(range(n)) or len(vertices) != 2 ** n:
            raise ComplexError(f"cube of dimension {n} with {len(vertices)} vertices and order {order}")

        def flip(v, r):
            return v[:r] + (1 - v[r],) + v[r + 1:]

        missing = [(v, r) for v in vertices for r in range(n) if v[r] == 0 and (v, r) not in edges]
        if missing:
            raise ComplexError(f"cube edges missing: {missing}")
        for v in vertices:
            for r, s in combinations(range(n), 2):
                if v[r] or v[s]:
                    continue
                path_rs = self.compose(edges[(flip(v, r), s)], edges[(v, r)])
                path_sr = self.compose(edges[(flip(v, s), r)], edges[(v, s)])
                for degree in set(path_rs.blocks) | set(path_sr.blocks):
                    if not is_zero_matrix(path_rs.block_at(*degree) - path_sr.block_at(*degree)):
                        logger_global.error(f"cube face {(v, r, s)} does not commute")
                        raise CubeFaceError(f"face at {v} in directions {r}, {s} does not commute", (v, r, s))

        verts, eds = dict(vertices), dict(edges)
        for r in order:
            folded = {v: self.cone(eds[(v, r)]) for v in verts if v[r] == 0}
            folded_edges = {}
            for (v, s), g in eds.items():
                if s == r or v[r] == 1:
                    continue
                folded_edges[(v, s)] = self.cone_map(eds[(v, r)], eds[(flip(v, s), r)], g, eds[(flip(v, r), s)],
                                                     folded[v], folded[flip(v, s)])
            verts, eds = folded, folded_edges
        logger_global.info(f"Folded a cube of dimension {n} in order {order}.")
        return verts[(0,) * n]

    def homology(self, c, coefficients=None):
        """
        The method computes the homology per bidegree. Over Z the free rank is
        dim - rank d_out - rank d_in and the torsion is given by the invariant
        factors of d_in; over Z/2 only ranks are reported.

        Returns
        ------
        BigradedGroups
        """
        coefficients = coefficients or self.KH_CONFIG.get_coefficients()
        if coefficients not in ('Z', 'Z/2'):
            raise ComplexError(f"unsupported coefficients {coefficients}")
        modulus = 2 if coefficients == 'Z/2' else None
        reduced = {}

        def reduce(i, j):
            if (i, j) not in reduced:
                reduced[(i, j)] = rank_and_torsion(matrix_entries(c.differential_at(i, j)), modulus)
            return reduced[(i, j)]

        rows = []
        for i, j in c.degrees():
            rank_out, _ = reduce(i, j)
            rank_in, torsion = reduce(i - 1, j)
            free = c.size_at(i, j) - rank_out - rank_in
            if free or torsion:
                rows.append((i, j, free, torsion))
        return BigradedGroups(tuple(rows), coefficients)

    def euler_characteristic(self, c):
        return sum((LaurentPoly.monomial(j, (-1) ** i * c.size_at(i, j)) for i, j in c.degrees()),
                   LaurentPoly.zero())

    def is_acyclic(self, c, coefficients=None):
        return self.homology(c, coefficients).is_zero()

    def verify_contraction(self, c, H):
        """
        The method checks that a degree -1 map H is a contraction of c,
        i.e. dH + Hd = I in every degree.

        Parameters
        ----------
        c : ChainComplex, obligatory
        H : dict, obligatory
            effective (i, j) -> matrix from degree i to degree i - 1

        Raises
        ------
        ShapeMismatchError
            if a block of H does not fit

        Returns
        ------
        bool
        """
        blocks = {degree: as_matrix(m, (c.size_at(degree[0] - 1, degree[1]), c.size_at(*degree)),
                                    f"contraction block at {degree}")
                  for degree, m in H.items()}

        def h(i, j):
            m = blocks.get((i, j))
            return m if m is not None else DomainMatrix.zeros((c.size_at(i - 1, j), c.size_at(i, j)), ZZ)

        for i, j in c.degrees():
            total = c.differential_at(i - 1, j) * h(i, j) + h(i + 1, j) * c.differential_at(i, j)
            identity = DomainMatrix.eye(c.size_at(i, j), ZZ).to_sparse()
            if not is_zero_matrix(total - identity):
                logger_global.info(f"Contraction fails at {(i, j)}.")
                return False
        return True

    def dump_complex(self, c):
        """
        The method renders a complex as plain text: generators per effective
        bidegree followed by the nonzero differential entries.
        """
        lines = [f"complex shift_h={c.shift_h} shift_q={c.shift_q} generators={c.total_rank()}"]
        for i, j in c.degrees():
            lines.append(f"C^({i},{j}) rank {c.size_at(i, j)}: {' '.join(c.labels_at(i, j))}")
        for i, j in c.degrees():
            entries = matrix_entries(c.differential_at(i, j))
            if not entries:
                continue
            lines.append(f"d^({i},{j}) shape {c.size_at(i + 1, j)}x{c.size_at(i, j)}")
            for (r, col), v in sorted(entries.items()):
                lines.append(f"  {c.labels_at(i + 1, j)[r]} <- {c.labels_at(i, j)[col]} : {v}")
        return '\n'.join(lines)
