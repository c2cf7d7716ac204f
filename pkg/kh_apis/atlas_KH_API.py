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

import os
import re
from dataclasses import dataclass

from tqdm import tqdm

from helpers import KHError, logger_global
from kh_apis.diagram_KH_API import DiagramError, _lift, _occurrences, _other, assemble

NAME_PATTERN = re.compile(r'^(\d+)_(\d+)$')


class AtlasFormatError(KHError):
    def __init__(self, message, line_number):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class AtlasEntryError(KHError):
    def __init__(self, message, name):
        super().__init__(f"entry {name}: {message}")
        self.name = name


@dataclass(frozen=True)
class AtlasEntry:
    name: str
    pd: str
    known_crossing_number: int


@dataclass(frozen=True)
class GroupVerdict:
    name: str
    diagrams: int
    homology_equal: bool
    jones_equal: bool
    mismatches: tuple

    @property
    def passed(self):
        return self.homology_equal and self.jones_equal


@dataclass(frozen=True)
class InvarianceReport:
    groups: tuple

    @property
    def passed(self):
        return all(group.passed for group in self.groups)

    @property
    def mismatches(self):
        return tuple(mismatch for group in self.groups for mismatch in group.mismatches)

    def to_records(self):
        return [{'knot': group.name, 'diagrams': group.diagrams,
                 'homology_equal': str(group.homology_equal).lower(), 'jones_equal': str(group.jones_equal).lower(),
                 'mismatches': '; '.join(group.mismatches) or '-'} for group in self.groups]


def _dedupe(diagrams):
    seen, unique = set(), []
    for d in diagrams:
        if d not in seen:
            seen.add(d)
            unique.append(d)
    return unique


def _try_assemble(crossings, loops, merges=(), name=''):
    try:
        return assemble(crossings, loops, merges, name)
    except DiagramError:
        return None


class AtlasAPI:
    """
    Mixin atlas API class: the bundled knot table, Reidemeister rewrites and
    the invariance suite.

    Methods
    -------
    default_table_path()
        returns str
    load_table(path)
        returns list of AtlasEntry
    find_entry(name, entries)
        returns AtlasEntry
    r1_insertions(d), r1_removals(d), r2_insertions(d), r2_removals(d), r3_moves(d)
        return list of KnotDiagram
    r_moves(d)
        returns list of KnotDiagram, one move away from d
    invariance_suite(entries)
        returns InvarianceReport
    """

    def default_table_path(self):
        return self.KH_CONFIG.get_atlas_path()

    def load_table(self, path):
        """
        The method reads a knot table, one `name<TAB>pd` entry per line. Blank
        lines and lines starting with # are skipped.

        Parameters
        ----------
        path : str, obligatory
            path to the table

        Raises
        ------
        AtlasFormatError
            for a malformed line, with its number
        AtlasEntryError
            if an entry does not parse as a knot diagram

        Returns
        ------
        list
            AtlasEntry
        """
        if not os.path.exists(path):
            logger_global.error(f"Knot table {path} does not exist.")
            raise KHError(f"knot table {path} does not exist")
        entries = []
        with open(path, encoding='utf-8') as table:
            for line_number, line in enumerate(table, start=1):
                line = line.rstrip('\n')
                if not line.strip() or line.lstrip().startswith('#'):
                    continue
                fields = line.split('\t')
                if len(fields) != 2:
                    logger_global.error(f"{path}:{line_number} is not `name<TAB>pd`")
                    raise AtlasFormatError("expected `name<TAB>pd`", line_number)
                name, pd = fields[0].strip(), fields[1].strip()
                match = NAME_PATTERN.match(name)
                if match is None:
                    raise AtlasFormatError(f"knot name {name!r} is not of the form <crossings>_<index>", line_number)
                try:
                    d = self.parse_pd(pd, name)
                except DiagramError as e:
                    raise AtlasEntryError(str(e), name)
                if not d.is_knot:
                    raise AtlasEntryError(f"{d.component_count} components", name)
                entries.append(AtlasEntry(name, pd, int(match.group(1))))
        logger_global.info(f"Loaded {len(entries)} entries from {path}.")
        return entries

    def find_entry(self, name, entries=None):
        entries = self.load_table(self.default_table_path()) if entries is None else entries
        for entry in entries:
            if entry.name == name:
                return entry
        raise AtlasEntryError("not in the table", name)

    def r1_insertions(self, d):
        """
        The method inserts a positive and a negative kink into every arc and
        every free loop.
        """
        lifted = _lift(d.crossings)
        results = []
        occurrences = _occurrences(lifted)
        for arc in sorted(occurrences):
            (x1, p1), (x2, p2) = occurrences[arc]
            e1, loop, e2 = arc, (arc[0], 1), (arc[0], 2)
            for kink in ((e1, loop, loop, e2), (e1, e2, loop, loop)):
                crossings = [list(arcs) for arcs in lifted]
                crossings[x2][p2] = e2
                results.append(_try_assemble([tuple(arcs) for arcs in crossings] + [kink], d.loops, name=d.name))
        if d.loops:
            e, loop = (0, 0), (0, 1)
            for kink in ((e, loop, loop, e), (e, e, loop, loop)):
                results.append(_try_assemble(lifted + [kink], d.loops - 1, name=d.name))
        return _dedupe(r for r in results if r is not None)

    def r1_removals(self, d):
        """
        The method removes every kink: a crossing listing the same arc at two
        cyclically adjacent slots.
        """
        lifted = _lift(d.crossings)
        results = []
        for x, arcs in enumerate(lifted):
            for p in range(4):
                if arcs[p] != arcs[(p + 1) % 4]:
                    continue
                u, v = arcs[(p + 2) % 4], arcs[(p + 3) % 4]
                rest = lifted[:x] + lifted[x + 1:]
                results.append(_try_assemble(rest, d.loops, [(u, v)], d.name))
        return _dedupe(r for r in results if r is not None)

    def r2_insertions(self, d):
        """
        The method pushes one boundary arc of a face over another boundary arc
        of the same face, in both stacking orders. Walking a face keeps it on
        the right: the pushed arc runs east along the top, the other one west
        along the bottom.
        """
        lifted = _lift(d.crossings)
        occurrences = _occurrences(lifted)
        results = []
        for face in self.faces(d):
            for dart_e in face:
                for dart_f in face:
                    e, f = lifted[dart_e[0]][dart_e[1]], lifted[dart_f[0]][dart_f[1]]
                    if e == f:
                        continue
                    arrive_e = _other(occurrences, lifted, *dart_e)
                    arrive_f = _other(occurrences, lifted, *dart_f)
                    e1, em, e2 = e, (e[0], 1), (e[0], 2)
                    f1, fm, f2 = f, (f[0], 1), (f[0], 2)
                    crossings = [list(arcs) for arcs in lifted]
                    crossings[arrive_e[0]][arrive_e[1]] = e2
                    crossings[arrive_f[0]][arrive_f[1]] = f2
                    crossings = [tuple(arcs) for arcs in crossings]
                    crossings += [(fm, e1, f2, em), (f1, e2, fm, em)]
                    results.append(_try_assemble(crossings, d.loops, name=d.name))
        return _dedupe(r for r in results if r is not None)

    def r2_removals(self, d):
        """
        The method removes every bigon whose two arcs run over at both ends and
        under at both ends respectively.
        """
        lifted = _lift(d.crossings)
        occurrences = _occurrences(lifted)
        results = []
        for face in self.faces(d):
            if len(face) != 2 or face[0][0] == face[1][0]:
                continue
            ends = []
            for x, p in face:
                ends.append(((x, p), _other(occurrences, lifted, x, p)))
            parities = {p % 2 == q % 2 for (_, p), (_, q) in ends}
            if parities != {True} or ends[0][0][1] % 2 == ends[1][0][1] % 2:
                continue
            x1, x2 = face[0][0], face[1][0]
            removed = {lifted[x][p] for x, p in face}
            over = [[arc for p, arc in enumerate(lifted[x]) if p % 2 == 1 and arc not in removed] for x in (x1, x2)]
            under = [[arc for p, arc in enumerate(lifted[x]) if p % 2 == 0 and arc not in removed] for x in (x1, x2)]
            if any(len(arcs) != 1 for arcs in over + under):
                continue
            rest = [arcs for x, arcs in enumerate(lifted) if x not in (x1, x2)]
            merges = [(over[0][0], over[1][0]), (under[0][0], under[1][0])]
            results.append(_try_assemble(rest, d.loops, merges, d.name))
        return _dedupe(r for r in results if r is not None)

    def r3_moves(self, d):
        """
        The method slides a strand across the crossing opposite to it in every
        triangular face with one strand over (or under) at both of its corners.
        Each strand then meets its two triangle crossings in the reverse order.
        """
        crossings = [tuple(arcs) for arcs in d.crossings]
        occurrences = _occurrences(crossings)
        results = []
        for face in self.faces(d):
            if len(face) != 3 or len({x for x, _ in face}) != 3:
                continue
            strands = [((x, p), _other(occurrences, crossings, x, p)) for x, p in face]
            if not any(p % 2 == q % 2 for (_, p), (_, q) in strands):
                continue
            moved = [list(arcs) for arcs in crossings]
            for (x, s), (y, t) in strands:
                inner = crossings[x][s]
                outer_x, outer_y = crossings[x][(s + 2) % 4], crossings[y][(t + 2) % 4]
                moved[x][(s + 2) % 4], moved[x][s] = inner, outer_y
                moved[y][(t + 2) % 4], moved[y][t] = inner, outer_x
            results.append(_try_assemble([tuple(arcs) for arcs in moved], d.loops, name=d.name))
        return _dedupe(r for r in results if r is not None and r != d)

    def r_moves(self, d):
        """
        The method lists the diagrams one Reidemeister move away from d: R1 kink
        insertions and removals, R2 insertions and removals, and R3 slides
        where a triangle allows one. Every output is a validated diagram.

        Parameters
        ----------
        d : KnotDiagram, obligatory

        Returns
        ------
        list
            KnotDiagram, without duplicates
        """
        moves = (self.r1_insertions(d) + self.r1_removals(d) + self.r2_insertions(d) +
                 self.r2_removals(d) + self.r3_moves(d))
        results = _dedupe(moves)
        logger_global.info(f"{len(results)} diagrams one move away from {d.name or self.render_pd(d)}.")
        return results

    def invariance_neighbour(self, d):
        slides = self.r3_moves(d)
        return slides[0] if slides else self.r1_insertions(d)[0]

    def invariance_suite(self, entries):
        """
        The method checks, per knot name, that the bigraded homology and the
        Jones polynomial agree across the listed diagrams and one Reidemeister
        neighbour of each.

        Parameters
        ----------
        entries : list, obligatory
            AtlasEntry

        Returns
        ------
        InvarianceReport
        """
        groups = {}
        for entry in entries:
            groups.setdefault(entry.name, []).append(entry)
        verdicts = []
        for name, members in tqdm(groups.items(), desc='invariance'):
            diagrams = []
            for n, entry in enumerate(members):
                d = self.parse_pd(entry.pd, name)
                diagrams += [(f"{name}#{n}", d), (f"{name}#{n}+move", self.invariance_neighbour(d))]
            reference_tag, reference = diagrams[0]
            reference_homology = self.homology(self.build_ckh(reference))
            reference_jones = self.jones_unnormalized(reference)
            mismatches = []
            homology_equal = jones_equal = True
            for tag, d in diagrams[1:]:
                if self.homology(self.build_ckh(d)) != reference_homology:
                    homology_equal = False
                    mismatches.append(f"homology of {tag} differs from {reference_tag}")
                if self.jones_unnormalized(d) != reference_jones:
                    jones_equal = False
                    mismatches.append(f"Jones of {tag} differs from {reference_tag}")
            verdicts.append(GroupVerdict(name, len(diagrams), homology_equal, jones_equal, tuple(mismatches)))
        report = InvarianceReport(tuple(verdicts))
        logger_global.info(f"Invariance suite over {len(verdicts)} knots: "
                           f"{'passed' if report.passed else 'mismatches found'}.")
        return report
