import pytest

from KH_API import parse_args, run
from conftest import KINK, TREFOIL, write_config


def test_parse_args(config_path):
    args = parse_args(['-x', config_path, '--format', 'table', 'cone', '3_1', '--double', '0,1'])
    assert args.verb == 'cone'
    assert args.double == '0,1'
    assert args.fold_order is None
    with pytest.raises(SystemExit):
        parse_args(['-x', config_path, 'split', '3_1'])


def test_jones(config_path, capsys):
    assert run(['-x', config_path, 'jones', TREFOIL]) == 0
    assert capsys.readouterr().out.strip() == 'q + q^3 + q^5 - q^9'


def test_homology_by_name(config_path, capsys):
    assert run(['-x', config_path, '--format', 'table', 'homology', '3_1']) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == 'i\tj\trank\ttorsion'
    assert '3\t7\t0\t2' in out


def test_homology_mod_two(config_path, capsys):
    assert run(['-x', config_path, '--coefficients', 'Z/2', 'homology', '3_1']) == 0
    assert 'i: 2\nj: 7\nrank: 1' in capsys.readouterr().out


def test_split_and_wall(config_path, capsys):
    assert run(['-x', config_path, 'split', '3_1', '--crossing', '1']) == 0
    assert 'upper_triangular: true' in capsys.readouterr().out
    assert run(['-x', config_path, 'wall', '3_1', '--crossing', '2']) == 0
    assert 'chain_map: pass' in capsys.readouterr().out


def test_cone(config_path, capsys):
    assert run(['-x', config_path, 'cone', KINK, '--double', '0']) == 0
    out = capsys.readouterr().out
    assert 'chi_check: pass' in out
    assert 'flag: type zero claim: cone not acyclic' in out
    assert run(['-x', config_path, 'cone', '3_1', '--double', '0,1', '--fold-order', '1,0']) == 0


def test_audit_exit_status(config_path, capsys):
    assert run(['-x', config_path, 'audit', '--max-crossings', '1', '--codim', '1']) == 1
    assert 'discrepancies: 2' in capsys.readouterr().out


def test_invariance(config_path, tmp_path, capsys):
    table = tmp_path / 'small.tsv'
    table.write_text('0_1\tPD[]\n3_1\tPD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]\n', encoding='utf-8')
    assert run(['-x', config_path, '--table', str(table), 'invariance']) == 0
    assert 'homology_equal: true' in capsys.readouterr().out


def test_expand(config_path, capsys):
    assert run(['-x', config_path, 'expand', '0_1', '--order', '2']) == 0
    assert capsys.readouterr().out.strip() == 'k: 0\nc_k: 2\n\nk: 1\nc_k: 0\n\nk: 2\nc_k: 1'


@pytest.mark.parametrize('argv', [
    ['jones', 'PD[X(1,2,3)]'],
    ['jones', '9_42'],
    ['cone', '3_1', '--double', '0,x'],
    ['expand', '3_1', '--order', '40'],
    ['audit', '--max-crossings', '9', '--codim', '1'],
])
def test_input_errors(config_path, argv, capsys):
    assert run(['-x', config_path] + argv) == 2
    assert capsys.readouterr().err.startswith('error:')


def test_missing_config(tmp_path, capsys):
    assert run(['-x', str(tmp_path / 'missing.xml'), 'jones', 'PD[]']) == 2
    assert 'Sorry' in capsys.readouterr().err


def test_state_guard_from_the_command_line(config_path):
    assert run(['-x', config_path, '--max-states', '4', 'homology', '3_1']) == 2


def test_invariance_table_after_the_verb(config_path, tmp_path, capsys):
    table = tmp_path / 'small.tsv'
    table.write_text('4_1\tPD[X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8)]\n'
                     '4_1\tPD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]\n', encoding='utf-8')
    assert run(['-x', config_path, 'invariance', '--table', str(table)]) == 1
    assert 'jones_equal: false' in capsys.readouterr().out


def test_jones_of_the_unknot_renders_ascending(config_path, capsys):
    assert run(['-x', config_path, 'jones', 'PD[]']) == 0
    assert capsys.readouterr().out.strip() == 'q^-1 + q'


def test_jones_as_a_table(config_path, capsys):
    assert run(['-x', config_path, '--format', 'table', 'jones', '3_1']) == 0
    assert capsys.readouterr().out.strip() == 'diagram\tjones\n3_1\tq + q^3 + q^5 - q^9'


def test_cone_as_a_table(config_path, capsys):
    assert run(['-x', config_path, '--format', 'table', 'cone', KINK, '--double', '0']) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == 'i\tj\trank\ttorsion'
    assert any(line.startswith('stratum\tcodim\t') for line in out.splitlines())


def test_unusable_log_directory(tmp_path, capsys):
    path = write_config(tmp_path)
    (tmp_path / 'logs').mkdir(exist_ok=True)
    (tmp_path / 'logs' / 'sessions').write_text('', encoding='utf-8')
    assert run(['-x', path, 'jones', 'PD[]']) == 2
    assert capsys.readouterr().err.startswith('error:')
