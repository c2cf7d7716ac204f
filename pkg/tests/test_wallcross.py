from itertools import combinations, permutations

import pytest

from conftest import KINK
from helpers import split_flagged_line
from kh_apis.diagram_KH_API import SingularDiagram
from kh_apis.polynomial_KH_API import LaurentPoly
from kh_apis.wallcross_KH_API import CHECK_FAILED_MARKER, AuditGuardError, NotAStratumError


def test_wall_morphism(api, trefoil):
    wall = api.wall_morphism(trefoil, 1)
    assert wall.positive == trefoil
    assert wall.negative.signs == (1, -1, 1)
    assert wall.source.total_rank() == api.build_ckh(trefoil).total_rank()
    assert wall.target.shift_h == -1 and wall.target.shift_q == -1


def test_wall_morphism_from_a_negative_crossing(api, trefoil):
    wall = api.wall_morphism(api.mirror(trefoil), 0)
    assert wall.positive.signs[0] == 1
    assert wall.negative.signs[0] == -1


def test_wall_morphism_blocks(api, trefoil):
    wall = api.wall_morphism(trefoil, 1)
    mapped = 0
    for (i, j), block in wall.map.blocks.items():
        labels = wall.source.labels_at(i, j)
        for (row, col), value in block.to_dok().items():
            assert labels[col].split(':')[0][1] == '0'
            assert value in (1, -1)
            mapped += 1
    assert mapped == sum(1 for i, j in wall.source.degrees() for label in wall.source.labels_at(i, j)
                         if label.split(':')[0][1] == '0')


def test_wall_morphism_on_every_table_crossing(api, entries):
    for entry in entries:
        d = api.parse_pd(entry.pd, entry.name)
        if d.crossing_count > 6:
            continue
        for k in range(d.crossing_count):
            api.wall_morphism(d, k)


def test_chi_check_on_trefoil_strata(api, trefoil):
    for ks in ([0], [0, 1], [0, 1, 2]):
        s = api.mark_singular(trefoil, ks)
        report = api.finite_type_report(s)
        assert report.chi_check
        assert report.chi == api.chi_oracle(s)
        assert report.codimension == len(ks)


def test_chi_check_on_figure_eight(api, entries):
    d = api.parse_pd(api.find_entry('4_1', entries).pd, '4_1')
    report = api.finite_type_report(api.mark_singular(d, [0, 2]))
    assert report.chi_check
    assert report.stratum_id == '4_1@0,2'
    assert not report.claimed_acyclic


def test_fold_order_does_not_change_homology(api, trefoil):
    s = api.mark_singular(trefoil, [0, 1, 2])
    reference = api.homology(api.singular_complex(s))
    for order in ((2, 1, 0), (1, 0, 2)):
        assert api.homology(api.singular_complex(s, order)) == reference


def test_chi_check_on_every_wall_of_small_diagrams(api, entries):
    for entry in entries:
        d = api.parse_pd(entry.pd, entry.name)
        if d.crossing_count > 6:
            continue
        for k in range(d.crossing_count):
            s = api.mark_singular(d, [k])
            assert api.euler_characteristic(api.singular_complex(s)) == api.chi_oracle(s), s.stratum_id


def test_fold_order_on_table_strata(api, entries):
    firsts = {}
    for entry in entries:
        firsts.setdefault(entry.name, api.parse_pd(entry.pd, entry.name))
    doubled = [api.mark_singular(firsts[name], ks) for name in ('3_1', '4_1', '5_1', '5_2')
               for ks in combinations(range(firsts[name].crossing_count), 2)][:20]
    tripled = [api.mark_singular(firsts[name], ks) for name in ('3_1', '4_1')
               for ks in combinations(range(firsts[name].crossing_count), 3)]
    assert len(doubled) == 20 and len(tripled) == 5
    for s in doubled + tripled:
        orders = list(permutations(range(s.codimension)))
        reference = api.homology(api.singular_complex(s, orders[0]))
        for order in orders[1:]:
            assert api.homology(api.singular_complex(s, order)) == reference, (s.stratum_id, order)


def test_one_double_point_is_the_cone_of_the_wall(api, trefoil):
    s = api.mark_singular(trefoil, [1])
    cone = api.cone(api.wall_morphism(trefoil, 1).map)
    assert api.homology(api.singular_complex(s)) == api.homology(cone)


def test_no_double_points(api, trefoil):
    with pytest.raises(NotAStratumError):
        api.singular_complex(SingularDiagram(trefoil, ()))


def test_kink_claim_is_flagged(api):
    kink = api.parse_pd(KINK, 'kink')
    report = api.finite_type_report(api.mark_singular(kink, [0]))
    assert report.claimed_acyclic
    assert report.chi_check
    assert report.chi == LaurentPoly({-2: -1, 2: 1})
    assert not report.acyclic
    assert report.discrepancy == 'type zero claim: cone not acyclic'
    assert report.to_record()['flag'] == report.discrepancy

    records = api.replay_session(api.session_file)
    assert records[0]['kind'] == 'discrepancy'
    assert records[0]['reason'] == 'type zero claim: cone not acyclic'
    assert records[0]['stratum'] == 'kink@0'


def test_replay_keeps_commas_in_stratum_ids(api):
    kink = api.parse_pd(KINK)
    api.finite_type_report(api.mark_singular(kink, [0]))
    assert api.replay_session(api.session_file)[0]['stratum'] == 'PD[X(1,2,2,1)]@0'


def test_self_test_report(api, trefoil):
    report = api.self_test_report(trefoil)
    assert report.acyclic
    assert report.discrepancy == ''
    assert report.stratum_id == '3_1@identity'


def test_audit_serial(api, entries):
    summary = api.audit_subcategory(1, 1, entries, workers=1)
    assert len(summary.reports) == 2
    assert summary.fraction_acyclic == 0.0
    assert len(summary.discrepancies) == 2
    assert all(report.chi_check for report in summary.reports)
    assert summary.summary_record()['discrepancies'] == 2


def test_audit_on_a_process_pool(api, entries):
    summary = api.audit_subcategory(1, 1, entries, workers=2)
    assert [report.stratum_id for report in summary.reports] == ['0_1@0', '0_1@0']
    assert len(api.replay_session(api.session_file)) == 2


def test_audit_of_two_crossing_diagrams(api, entries):
    summary = api.audit_subcategory(2, 1, entries, workers=1)
    assert len(summary.reports) == 6
    assert all(report.chi_check for report in summary.reports)
    assert len(api.audit_subcategory(2, 2, entries, workers=1).reports) == 2


def test_audit_strata(api, entries):
    strata = api.audit_strata(3, 2, entries)
    assert {s.codimension for s in strata} == {2}
    assert sum(1 for s in strata if s.base.name == '3_1') == 3
    assert all(s.base.crossing_count <= 3 for s in strata)


@pytest.mark.parametrize('max_crossings, codim', [(8, 1), (3, 0), (3, 4), (-1, 1)])
def test_audit_guard(api, entries, max_crossings, codim):
    with pytest.raises(AuditGuardError):
        api.audit_subcategory(max_crossings, codim, entries)


def test_split_flagged_line():
    line = '18-Oct-26 10:02:12 : KH_API - CHECK_FAILED: chi_check failed, PD[X(1,4,2,5), X(3,6,4,1)]@0,1'
    assert split_flagged_line(line, CHECK_FAILED_MARKER) == ('chi_check failed', 'PD[X(1,4,2,5), X(3,6,4,1)]@0,1')
