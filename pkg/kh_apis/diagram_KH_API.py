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

"""
Oriented planar-diagram (PD) codes: parsing, validation, rewriting and complete
resolutions.

Conventions. X(a,b,c,d) lists the arcs counterclockwise starting from the
incoming under-strand, so the under-strand runs a -> c. The crossing is positive
when the over-strand runs b -> d. The 0-smoothing joins (a,d) and (b,c), the
1-smoothing joins (a,b) and (c,d); for a positive crossing the 0-smoothing is the
oriented one.
"""

import re
from collections import defaultdict
from dataclasses import dataclass, field

from helpers import KHError, logger_global


class DiagramError(KHError):
    pass


class PDSyntaxError(DiagramError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ArcLabelError(DiagramError):
    pass


class OrientationError(DiagramError):
    pass


class PlanarityError(DiagramError):
    pass


class CrossingIndexError(DiagramError):
    pass


class ResolutionError(DiagramError):
    pass


class ComponentError(DiagramError):
    pass


def _occurrences(crossings):
    occurrences = defaultdict(list)
    for x, arcs in enumerate(crossings):
        for p, arc in enumerate(arcs):
            occurrences[arc].append((x, p))
    return occurrences


def _other(occurrences, crossings, x, p):
    first, second = occurrences[crossings[x][p]]
    return second if first == (x, p) else first


def _walk(crossings, occurrences, start):
    # entries (x, p): the strand enters crossing x at slot p and leaves at p + 2
    entries = []
    x, p = start
    while True:
        entries.append((x, p))
        x, p = _other(occurrences, crossings, x, (p + 2) % 4)
        if (x, p) == start:
            return entries


def _raw_components(crossings):
    occurrences = _occurrences(crossings)
    seen = set()
    components = []
    for arc in sorted(occurrences):
        start = occurrences[arc][0]
        if start in seen:
            continue
        entries = _walk(crossings, occurrences, start)
        for x, p in entries:
            seen.add((x, p))
            seen.add((x, (p + 2) % 4))
        components.append(entries)
    return components


def _orient(crossings):
    """
    Orient every traced component so that under-strands are entered at slot a.

    Returns
    ------
    tuple
        (components as lists of entries, crossing signs)

    Raises
    ------
    OrientationError
        if a component enters under-strands both at slot a and at slot c
    """
    components = []
    for entries in _raw_components(crossings):
        under = {p for _, p in entries if p % 2 == 0}
        if under == {2}:
            entries = [(x, (p + 2) % 4) for x, p in reversed(entries)]
        elif under == {0, 2}:
            raise OrientationError("no coherent strand orientation exists for the PD code")
        components.append(entries)

    signs = [0] * len(crossings)
    for entries in components:
        for x, p in entries:
            if p % 2 == 1:
                signs[x] = 1 if p == 1 else -1
    return components, tuple(signs)


def _reorient(crossings):
    # rotate by two the crossings whose under-strand is walked c -> a
    rotate = set()
    for entries in _raw_components(crossings):
        under = {p for _, p in entries if p % 2 == 0}
        if under == {0, 2}:
            rotate |= {x for x, p in entries if p == 2}
    return [(c, d, a, b) if x in rotate else (a, b, c, d) for x, (a, b, c, d) in enumerate(crossings)]


def _face_darts(crossings):
    occurrences = _occurrences(crossings)
    seen = set()
    faces = []
    for x in range(len(crossings)):
        for p in range(4):
            if (x, p) in seen:
                continue
            face = []
            dart = (x, p)
            while dart not in seen:
                seen.add(dart)
                face.append(dart)
                nx, np_ = _other(occurrences, crossings, *dart)
                dart = (nx, (np_ + 1) % 4)
            faces.append(face)
    return faces


def _connected_pieces(crossings):
    parent = list(range(len(crossings)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for positions in _occurrences(crossings).values():
        (x1, _), (x2, _) = positions
        parent[find(x1)] = find(x2)
    return len({find(i) for i in range(len(crossings))})


def _validate_arcs(crossings):
    for x, arcs in enumerate(crossings):
        if len(arcs) != 4:
            raise ArcLabelError(f"crossing {x} has {len(arcs)} arc labels instead of 4")
    counts = defaultdict(int)
    for arcs in crossings:
        for arc in arcs:
            counts[arc] += 1
    wrong = sorted(arc for arc, count in counts.items() if count != 2)
    if wrong:
        raise ArcLabelError(f"arc labels {wrong} do not appear exactly twice")
    expected = set(range(1, 2 * len(crossings) + 1))
    if set(counts) != expected:
        missing = sorted(expected - set(counts))
        raise ArcLabelError(f"arc labels are not the contiguous range 1..{len(expected)}, missing {missing}")


@dataclass(frozen=True)
class KnotDiagram:
    """
    Oriented PD presentation of a knot or link. Validated at construction and
    immutable afterwards.

    Attributes
    ----------
    crossings : tuple
        4-tuples of arc labels, see the module conventions
    loops : int
        number of crossingless circle components; the empty PD code is one loop
    name : str
        optional label, ignored by equality
    """
    crossings: tuple
    loops: int = 0
    name: str = field(default='', compare=False)
    signs: tuple = field(default=(), init=False, compare=False, repr=False)
    component_count: int = field(default=0, init=False, compare=False, repr=False)

    def __post_init__(self):
        crossings = tuple(tuple(int(arc) for arc in arcs) for arcs in self.crossings)
        object.__setattr__(self, 'crossings', crossings)
        if self.loops < 0:
            raise DiagramError("the number of loops cannot be negative")
        if not crossings and self.loops == 0:
            raise DiagramError("the empty diagram has no components")
        _validate_arcs(crossings)
        components, signs = _orient(crossings)
        if crossings:
            faces = len(_face_darts(crossings))
            expected = len(crossings) + 2 * _connected_pieces(crossings)
            if faces != expected:
                raise PlanarityError(f"PD code is not planar: {faces} faces instead of {expected}")
        object.__setattr__(self, 'signs', signs)
        object.__setattr__(self, 'component_count', len(components) + self.loops)

    @property
    def crossing_count(self):
        return len(self.crossings)

    @property
    def arc_count(self):
        return 2 * len(self.crossings)

    @property
    def n_plus(self):
        return sum(1 for sign in self.signs if sign > 0)

    @property
    def n_minus(self):
        return sum(1 for sign in self.signs if sign < 0)

    @property
    def is_knot(self):
        return self.component_count == 1

    def check_index(self, k):
        if not 0 <= k < len(self.crossings):
            raise CrossingIndexError(f"crossing index {k} out of range for a {len(self.crossings)}-crossing diagram")


@dataclass(frozen=True)
class SingularDiagram:
    """
    A diagram with some crossings marked as transversal double points.

    A doubled crossing has no over/under information of its own: resolution
    vector v puts it positive where v is 0 and negative where v is 1.
    """
    base: KnotDiagram
    doubled: tuple

    @property
    def codimension(self):
        return len(self.doubled)

    @property
    def stratum_id(self):
        return f"{self.base.name or render_pd(self.base)}@{','.join(str(k) for k in self.doubled)}"

    def resolution(self, vector):
        if len(vector) != len(self.doubled):
            raise ResolutionError(f"resolution vector of length {len(vector)} for {len(self.doubled)} double points")
        crossings = list(self.base.crossings)
        for k, bit in zip(self.doubled, vector):
            wanted = 1 if bit == 0 else -1
            if self.base.signs[k] != wanted:
                crossings[k] = _switched(crossings[k], self.base.signs[k])
        return KnotDiagram(tuple(crossings), self.base.loops, self.base.name)


@dataclass(frozen=True)
class ResolutionState:
    state: tuple
    circles: tuple
    loops: int = 0

    @property
    def circle_count(self):
        return len(self.circles) + self.loops


def _switched(arcs, sign):
    a, b, c, d = arcs
    return (b, c, d, a) if sign > 0 else (d, a, b, c)


def smoothing_pairs(arcs, bit):
    a, b, c, d = arcs
    return ((a, b), (c, d)) if bit else ((a, d), (b, c))


def resolution_circles(crossings, state):
    """
    The function computes the circles of a complete resolution by transitive
    closure of the smoothing reconnections.

    Returns
    ------
    tuple
        frozensets of arc labels, sorted by their minimal label
    """
    parent = {}

    def find(arc):
        root = arc
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(arc, arc) != root:
            parent[arc], arc = root, parent[arc]
        return root

    for arcs, bit in zip(crossings, state):
        for u, v in smoothing_pairs(arcs, bit):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)

    groups = defaultdict(set)
    for arc in range(1, 2 * len(crossings) + 1):
        groups[find(arc)].add(arc)
    return tuple(sorted((frozenset(group) for group in groups.values()), key=min))


def render_pd(d):
    items = [f"X({a},{b},{c},{d_})" for a, b, c, d_ in d.crossings]
    if items or d.loops != 1:
        items += ['O'] * d.loops
    return f"PD[{', '.join(items)}]"


class _PDScanner:
    _integer = re.compile(r'\d+')

    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def expect(self, options):
        char = self.peek()
        if char == '' or char not in options:
            raise PDSyntaxError(f"expected one of {list(options)}, got {char or 'end of input'!r}", self.pos)
        self.pos += 1
        return char

    def keyword(self, word):
        self.skip()
        if not self.text.startswith(word, self.pos):
            raise PDSyntaxError(f"expected {word!r}", self.pos)
        self.pos += len(word)

    def integer(self):
        self.skip()
        match = self._integer.match(self.text, self.pos)
        if match is None:
            raise PDSyntaxError("expected a positive arc label", self.pos)
        self.pos = match.end()
        return int(match.group())

    def at_end(self):
        self.skip()
        return self.pos == len(self.text)


_closing = {'[': ']', '(': ')'}


def _parse_items(scanner):
    crossings, loops = [], 0
    scanner.keyword('PD')
    closer = _closing[scanner.expect('[(')]
    if scanner.peek() == closer:
        scanner.pos += 1
        return crossings, loops
    while True:
        head = scanner.peek()
        if head == 'X':
            scanner.pos += 1
            inner = _closing[scanner.expect('[(')]
            arcs = [scanner.integer()]
            for _ in range(3):
                scanner.expect(',')
                arcs.append(scanner.integer())
            scanner.expect(inner)
            crossings.append(tuple(arcs))
        elif head == 'O':
            scanner.pos += 1
            loops += 1
        else:
            raise PDSyntaxError(f"expected a crossing X(...) or a loop O, got {head or 'end of input'!r}",
                                scanner.pos)
        if scanner.expect(',' + closer) == closer:
            return crossings, loops


class DiagramAPI:
    """
    Mixin diagram API class contains all diagram methods.

    Methods
    -------
    parse_pd(text, name)
        returns KnotDiagram
    render_pd(d)
        returns str, the canonical PD text
    switch_crossing(d, k)
        returns KnotDiagram with crossing k switched
    mirror(d)
        returns KnotDiagram with every crossing switched
    resolve(d, state)
        returns ResolutionState
    writhe(d)
        returns int
    crossing_signs(d)
        returns tuple of +1/-1
    component_count(d)
        returns int
    mark_singular(d, ks)
        returns SingularDiagram
    smooth_crossing(d, k, bit)
        returns KnotDiagram with crossing k replaced by a smoothing
    faces(d)
        returns list of faces as lists of darts (crossing, slot)
    to_record(d)
        returns dictionary {name, pd, writhe}
    """

    def parse_pd(self, text, name=''):
        """
        The method parses and validates a PD code `PD[X(a,b,c,d), ...]`.
        Square brackets are accepted for the crossings as well, and `O` adds a
        crossingless loop. `PD[]` is the unknot.

        Parameters
        ----------
        text : str, obligatory
            the PD code
        name : str, optional
            label attached to the diagram

        Raises
        ------
        PDSyntaxError, ArcLabelError, OrientationError, PlanarityError

        Returns
        ------
        KnotDiagram
            the validated diagram
        """
        scanner = _PDScanner(text)
        try:
            crossings, loops = _parse_items(scanner)
            if not scanner.at_end():
                raise PDSyntaxError("unexpected trailing input", scanner.pos)
            if not crossings and loops == 0:
                loops = 1
            diagram = KnotDiagram(tuple(crossings), loops, name)
        except DiagramError as e:
            logger_global.error(f"Parsing PD code {text!r} failed: {e}")
            raise
        logger_global.info(f"Parsed PD code {name or text}: {diagram.crossing_count} crossings, "
                           f"{diagram.component_count} component(s).")
        return diagram

    def render_pd(self, d):
        return render_pd(d)

    def switch_crossing(self, d, k):
        """
        The method exchanges the over- and under-strand at crossing k by a
        cyclic re-rooting of its tuple. The sign at k is negated.

        Parameters
        ----------
        d : KnotDiagram, obligatory
        k : int, obligatory
            crossing index

        Raises
        ------
        CrossingIndexError

        Returns
        ------
        KnotDiagram
        """
        d.check_index(k)
        crossings = list(d.crossings)
        crossings[k] = _switched(crossings[k], d.signs[k])
        return KnotDiagram(tuple(crossings), d.loops, d.name)

    def mirror(self, d):
        crossings = tuple(_switched(arcs, sign) for arcs, sign in zip(d.crossings, d.signs))
        return KnotDiagram(crossings, d.loops, d.name)

    def resolve(self, d, state):
        """
        The method computes the complete resolution of a diagram for a state.

        Parameters
        ----------
        d : KnotDiagram, obligatory
        state : tuple, obligatory
            one bit per crossing, 0 or 1

        Raises
        ------
        ResolutionError
            if the state length differs from the number of crossings

        Returns
        ------
        ResolutionState
        """
        state = tuple(int(bit) for bit in state)
        if len(state) != d.crossing_count:
            raise ResolutionError(f"state of length {len(state)} for a {d.crossing_count}-crossing diagram")
        if any(bit not in (0, 1) for bit in state):
            raise ResolutionError(f"state {state} is not a bit vector")
        return ResolutionState(state, resolution_circles(d.crossings, state), d.loops)

    def writhe(self, d):
        return sum(d.signs)

    def crossing_signs(self, d):
        return d.signs

    def component_count(self, d):
        return d.component_count

    def mark_singular(self, d, ks):
        """
        The method marks crossings of a diagram as double points.

        Parameters
        ----------
        d : KnotDiagram, obligatory
        ks : iterable, obligatory
            distinct crossing indices

        Raises
        ------
        CrossingIndexError
            for an index out of range or a repeated index

        Returns
        ------
        SingularDiagram
        """
        ks = list(ks)
        if len(set(ks)) != len(ks):
            raise CrossingIndexError(f"duplicate double point index in {ks}")
        for k in ks:
            d.check_index(k)
        return SingularDiagram(d, tuple(sorted(ks)))

    def smooth_crossing(self, d, k, bit):
        """
        The method replaces crossing k by its 0- or 1-smoothing, relabels the arcs
        contiguously and re-orients the strands. The result may be a link.

        Returns
        ------
        KnotDiagram
        """
        d.check_index(k)
        lifted = _lift(d.crossings)
        merges = smoothing_pairs(lifted[k], bit)
        return assemble(lifted[:k] + lifted[k + 1:], d.loops, merges, d.name)

    def faces(self, d):
        return _face_darts(d.crossings)

    def to_record(self, d):
        return {'name': d.name, 'pd': render_pd(d), 'writhe': self.writhe(d)}


def _lift(crossings):
    return [tuple((arc, 0) for arc in arcs) for arcs in crossings]


def assemble(crossings, loops, merges=(), name=''):
    """
    The function builds a diagram from crossings with arbitrary sortable arc
    labels. Labels in `merges` are identified first; a merged class that no
    longer occurs in any crossing becomes a free loop. Labels are then made
    contiguous and the strands re-oriented.

    Parameters
    ----------
    crossings : list, obligatory
        4-tuples of sortable labels
    loops : int, obligatory
        number of free loops before the merge
    merges : iterable, optional
        pairs of labels to identify
    name : str, optional

    Returns
    ------
    KnotDiagram
    """
    parent = {}

    def find(label):
        while parent.get(label, label) != label:
            label = parent[label]
        return label

    involved = set()
    for u, v in merges:
        involved |= {u, v}
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)

    mapped = [tuple(find(label) for label in arcs) for arcs in crossings]
    present = {label for arcs in mapped for label in arcs}
    loops += len({find(label) for label in involved} - present)
    relabel = {old: new for new, old in enumerate(sorted(present), start=1)}
    relabelled = [tuple(relabel[label] for label in arcs) for arcs in mapped]
    return KnotDiagram(tuple(_reorient(relabelled)), loops, name)
