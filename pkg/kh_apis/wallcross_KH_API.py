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

import logging
import multiprocessing
import time
from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional

from file_read_backwards import FileReadBackwards
from tqdm import tqdm

from helpers import CheckFailure, KHError, logger_global, split_flagged_line
from kh_apis.complex_KH_API import sparse_matrix
from kh_apis.diagram_KH_API import ComponentError, SingularDiagram, resolution_circles
from kh_apis.polynomial_KH_API import LaurentPoly
from multiprocessing_logging import AUDIT_LOGGER, listener_configurer, listener_process, worker_configurer

# diagrams with at most this many crossings are claimed to carry a type zero local system
TYPE_ZERO_CLAIM_MAX_CROSSINGS = 2
MAX_AUDIT_CROSSINGS = 7
MAX_AUDIT_CODIMENSION = 3

DISCREPANCY_MARKER = 'KH_API - DISCREPANCY:'
CHECK_FAILED_MARKER = 'KH_API - CHECK_FAILED:'


class NotAStratumError(KHError):
    pass


class WallIdentificationError(CheckFailure):
    pass


class AuditGuardError(KHError):
    pass


@dataclass(frozen=True)
class WallMorphism:
    """
    The wall-crossing map from CKh(K+) to CKh(K-)[1]{-1} at crossing k, both
    in raw cube gradings. Identity (up to the cube sign) on the states with
    bit k = 0, zero on the rest.
    """
    k: int
    positive: object
    negative: object
    map: object

    @property
    def source(self):
        return self.map.source

    @property
    def target(self):
        return self.map.target


@dataclass(frozen=True)
class FiniteTypeReport:
    stratum_id: str
    codimension: int
    crossings: int
    cone_homology: object
    acyclic: bool
    chi: LaurentPoly
    chi_oracle: LaurentPoly
    naive_skein_offset: LaurentPoly
    claimed_acyclic: bool
    order_verdict: str
    stratum: Optional[SingularDiagram] = None

    @property
    def chi_check(self):
        return self.chi == self.chi_oracle

    @property
    def discrepancy(self):
        if not self.chi_check:
            return 'chi_check failed'
        if self.claimed_acyclic and not self.acyclic:
            return 'type zero claim: cone not acyclic'
        return ''

    def to_record(self):
        return {'stratum': self.stratum_id, 'codim': self.codimension, 'crossings': self.crossings,
                'acyclic': str(self.acyclic).lower(), 'homology': str(self.cone_homology),
                'chi': str(self.chi), 'chi_check': 'pass' if self.chi_check else 'fail',
                'naive_skein_offset': str(self.naive_skein_offset), 'verdict': self.order_verdict,
                'flag': self.discrepancy or '-'}

    def to_row(self):
        return {'stratum': self.stratum_id, 'codim': self.codimension, 'acyclic': str(self.acyclic).lower(),
                'chi_check': 'pass' if self.chi_check else 'fail', 'flag': self.discrepancy or '-'}


@dataclass(frozen=True)
class AuditSummary:
    max_crossings: int
    codimension: int
    reports: tuple

    @property
    def fraction_acyclic(self):
        if not self.reports:
            return 0.0
        return sum(1 for report in self.reports if report.acyclic) / len(self.reports)

    @property
    def discrepancies(self):
        return tuple(report for report in self.reports if report.discrepancy)

    def summary_record(self):
        return {'max_crossings': self.max_crossings, 'codim': self.codimension, 'strata': len(self.reports),
                'acyclic': sum(1 for report in self.reports if report.acyclic),
                'fraction_acyclic': f"{self.fraction_acyclic:.4f}", 'discrepancies': len(self.discrepancies)}


_WORKER_API = None


def _audit_worker_init(kh_config, queue):
    global _WORKER_API
    from KH_API import KHApi

    worker_configurer(queue)
    _WORKER_API = KHApi(kh_config, session_log=False)


def _audit_worker(stratum):
    report = _WORKER_API.finite_type_report(stratum)
    logging.getLogger(AUDIT_LOGGER).info(f"{report.stratum_id} acyclic={report.acyclic} "
                                         f"chi_check={'pass' if report.chi_check else 'fail'}")
    return report


class WallCrossAPI:
    """
    Mixin wall-crossing API class: wall morphisms, singular complexes as
    iterated cones and the finite-type audit.

    Methods
    -------
    wall_morphism(d, k)
        returns WallMorphism
    singular_complex(s, order)
        returns ChainComplex
    finite_type_report(s, order)
        returns FiniteTypeReport
    self_test_report(d)
        returns FiniteTypeReport of the cone of the identity
    audit_subcategory(max_crossings, codim, entries, workers)
        returns AuditSummary
    replay_session(session_file)
        returns list of flagged records, newest first
    """

    def __wall_map(self, positive, negative, source, target, k, twist=1):
        """
        Maps generator (s, L) with s_k = 0 to (s + e_k, L) with coefficient
        twist * (-1)^(1s of s below k).
        """
        for state in product((0, 1), repeat=positive.crossing_count):
            if state[k]:
                continue
            flipped = state[:k] + (1,) + state[k + 1:]
            if resolution_circles(positive.crossings, state) != resolution_circles(negative.crossings, flipped):
                logger_global.error(f"circle partitions differ across the wall at crossing {k}, state {state}")
                raise WallIdentificationError(f"circle partitions differ across the wall at crossing {k}")
        blocks = {}
        for i, j in source.degrees():
            entries = {}
            for col, label in enumerate(source.labels_at(i, j)):
                state, labeling = label.split(':')
                if state[k] == '1':
                    continue
                degree, row = target.index_of(f"{state[:k]}1{state[k + 1:]}:{labeling}")
                if degree != (i, j):
                    raise WallIdentificationError(f"{label} lands in degree {degree} instead of {(i, j)}")
                entries[(row, col)] = twist * (-1) ** state[:k].count('1')
            if entries:
                blocks[(i, j)] = sparse_matrix(entries, (target.size_at(i, j), source.size_at(i, j)))
        return self.build_chain_map(source, target, blocks)

    def wall_morphism(self, d, k):
        """
        The method builds the wall-crossing morphism at crossing k, from the
        diagram where k is positive to the diagram where it is negative. A
        negative crossing k is switched first, so the wall is always crossed
        from the overcrossing side.

        Parameters
        ----------
        d : KnotDiagram, obligatory
        k : int, obligatory
            crossing index

        Raises
        ------
        CrossingIndexError
        WallIdentificationError
            if the circle partitions do not match across the wall
        ChainMapError
            if d w != w d, reports the degree

        Returns
        ------
        WallMorphism
        """
        d.check_index(k)
        positive = d if d.signs[k] > 0 else self.switch_crossing(d, k)
        negative = self.switch_crossing(positive, k)
        source = self.build_ckh(positive).stripped()
        target = self.shift(self.build_ckh(negative).stripped(), 1, -1)
        f = self.__wall_map(positive, negative, source, target, k)
        logger_global.info(f"Wall morphism of {d.name or 'diagram'} at crossing {k} is a chain map.")
        return WallMorphism(k, positive, negative, f)

    def singular_complex(self, s, order=None):
        """
        The method builds the complex of a singular diagram as the total complex
        of the cube of its resolutions. Vertex v carries CKh(K_v)[|v|]{-|v|} in
        raw gradings, the edge in direction r is the wall morphism at the r-th
        double point twisted by (-1)^(v_0 + ... + v_(r-1)).

        Parameters
        ----------
        s : SingularDiagram, obligatory
        order : sequence, optional
            folding order of the double points

        Raises
        ------
        NotAStratumError
            if there are no double points
        ComponentError
            if the diagram is a link
        CubeFaceError, ChainMapError

        Returns
        ------
        ChainComplex
        """
        m = s.codimension
        if m == 0:
            raise NotAStratumError("a singular diagram needs at least one double point")
        if not s.base.is_knot:
            raise ComponentError(f"singular complexes are built for knots, got {s.base.component_count} components")
        vectors = list(product((0, 1), repeat=m))
        diagrams = {v: s.resolution(v) for v in vectors}
        vertices = {v: self.shift(self.build_ckh(diagrams[v]).stripped(), sum(v), -sum(v)) for v in vectors}
        edges = {}
        for v in vectors:
            for r in range(m):
                if v[r]:
                    continue
                w = v[:r] + (1,) + v[r + 1:]
                twist = (-1) ** sum(v[:r])
                edges[(v, r)] = self.__wall_map(diagrams[v], diagrams[w], vertices[v], vertices[w],
                                                s.doubled[r], twist)
        total = self.cube_total(vertices, edges, order)
        logger_global.info(f"Singular complex of {s.stratum_id}: {total.total_rank()} generators.")
        return total

    def chi_oracle(self, s):
        """
        Returns (-1)^m sum_v q^(-|v|) <K_v>, the Euler characteristic of the
        singular complex computed from the bracket state sum alone.
        """
        weighted = self.skein_polynomial(self.kauffman_bracket, s, LaurentPoly.monomial(-1, -1))
        return weighted * (-1) ** s.codimension

    def finite_type_report(self, s, order=None):
        """
        The method builds the singular complex of a stratum, computes its
        homology and cross-checks its Euler characteristic against the state-sum
        oracle. The homology is reported with the orientation offsets of the
        all-positive resolution.

        Returns
        ------
        FiniteTypeReport
        """
        total = self.singular_complex(s, order)
        groups = self.homology(total)
        base = s.resolution((0,) * s.codimension)
        chi = self.euler_characteristic(total)
        naive = self.skein_polynomial(self.kauffman_bracket, s) * (-1) ** s.codimension
        claimed = s.base.crossing_count <= TYPE_ZERO_CLAIM_MAX_CROSSINGS
        n = s.codimension - 1
        if groups.is_zero():
            verdict = f"acyclic cone at codimension {s.codimension}: evidence for type <= {n}"
        else:
            verdict = f"cone not acyclic at codimension {s.codimension}: no evidence for type <= {n}"
        report = FiniteTypeReport(s.stratum_id, s.codimension, s.base.crossing_count,
                                  groups.shifted(-base.n_minus, base.n_plus - 2 * base.n_minus),
                                  groups.is_zero(), chi, self.chi_oracle(s), chi - naive, claimed, verdict, s)
        self.__flag(report)
        return report

    def self_test_report(self, d):
        """
        The method reports on the cone of the identity of CKh(d), which is
        acyclic for every diagram.
        """
        c = self.build_ckh(d, allow_links=True)
        cone = self.cone(self.identity_map(c))
        groups = self.homology(cone)
        zero = LaurentPoly.zero()
        verdict = 'acyclic' if groups.is_zero() else 'identity cone not acyclic'
        report = FiniteTypeReport(f"{d.name or self.render_pd(d)}@identity", 0, d.crossing_count, groups,
                                  groups.is_zero(), self.euler_characteristic(cone), zero, zero, True, verdict)
        self.__flag(report)
        return report

    def __flag(self, report):
        if not report.discrepancy:
            return
        marker = CHECK_FAILED_MARKER if not report.chi_check else DISCREPANCY_MARKER
        logger_global.warning(f"{report.stratum_id}: {report.discrepancy}")
        if self.session_logger is not None:
            self.session_logger.info(f"{marker} {report.discrepancy}, {report.stratum_id}")

    def audit_strata(self, max_crossings, codim, entries=None):
        """
        Returns the singular diagrams of the audit: every atlas diagram with at
        most max_crossings crossings, doubled at every set of codim crossings.
        """
        if not 0 <= max_crossings <= MAX_AUDIT_CROSSINGS or not 1 <= codim <= MAX_AUDIT_CODIMENSION:
            logger_global.error(f"audit ({max_crossings}, {codim}) outside the guard")
            raise AuditGuardError(f"audit needs max_crossings <= {MAX_AUDIT_CROSSINGS} "
                                  f"and 1 <= codim <= {MAX_AUDIT_CODIMENSION}")
        entries = self.load_table(self.default_table_path()) if entries is None else entries
        strata = []
        for entry in entries:
            d = self.parse_pd(entry.pd, entry.name)
            if d.crossing_count > max_crossings:
                continue
            strata += [self.mark_singular(d, ks) for ks in combinations(range(d.crossing_count), codim)]
        return strata

    def audit_subcategory(self, max_crossings, codim, entries=None, workers=None):
        """
        The method runs finite_type_report on every stratum of the audit corpus,
        serially or on a process pool. Worker records go through a queue to a
        listener process writing LOG_DIR/audit-<timestamp>.log.

        Parameters
        ----------
        max_crossings : int, obligatory
            at most 7
        codim : int, obligatory
            number of double points, 1 to 3
        entries : list, optional
            AtlasEntry list, the default table when omitted
        workers : int, optional
            number of processes, WORKERS from the configuration when omitted

        Raises
        ------
        AuditGuardError

        Returns
        ------
        AuditSummary
        """
        strata = self.audit_strata(max_crossings, codim, entries)
        workers = workers or self.KH_CONFIG.get_workers()
        logger_global.info(f"Audit of {len(strata)} strata, max_crossings={max_crossings}, codim={codim}, "
                           f"workers={workers}.")
        if workers <= 1 or len(strata) < 2:
            reports = [self.finite_type_report(s) for s in tqdm(strata, desc='audit')]
        else:
            queue = multiprocessing.Queue(-1)
            listener = multiprocessing.Process(target=listener_process,
                                               args=(queue, listener_configurer,
                                                     f"audit-{time.strftime('%Y%m%d-%H%M%S')}",
                                                     self.KH_CONFIG.get_log_path()))
            listener.start()
            try:
                with multiprocessing.Pool(workers, initializer=_audit_worker_init,
                                          initargs=(self.KH_CONFIG, queue)) as pool:
                    reports = list(tqdm(pool.imap(_audit_worker, strata), total=len(strata), desc='audit'))
            finally:
                queue.put(None)
                listener.join()
            for report in reports:
                self.__flag(report)
        summary = AuditSummary(max_crossings, codim, tuple(reports))
        logger_global.info(f"Audit finished: {summary.summary_record()}")
        return summary

    def replay_session(self, session_file):
        """
        The method reads a session log backwards and returns its flagged
        records, newest first.

        Parameters
        ----------
        session_file : str, obligatory
            path to the session file

        Returns
        ------
        list
            dictionaries {date, kind, reason, stratum}
        """
        records = []
        with FileReadBackwards(session_file, encoding="utf-8") as frb:
            for line in frb:
                msg_date = line[0: line.find(' : ')]
                for kind, marker in (('discrepancy', DISCREPANCY_MARKER), ('check_failed', CHECK_FAILED_MARKER)):
                    if marker in line:
                        reason, stratum = split_flagged_line(line, marker)
                        records.append({'date': msg_date, 'kind': kind, 'reason': reason,
                                        'stratum': stratum})
        logger_global.info(f"Replayed {len(records)} flagged record(s) from {session_file}.")
        return records
