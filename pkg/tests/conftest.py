import os

import pytest

from KH_API import KHApi
from KH_config import KHConfig

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
ATLAS = os.path.join(REPO_ROOT, 'data', 'atlas.tsv')

TREFOIL = 'PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]'
HOPF = 'PD[X(3,1,4,2), X(1,3,2,4)]'
KINK = 'PD[X(1,2,2,1)]'
TORUS_2_9 = ('PD[X(1,10,2,11), X(3,12,4,13), X(5,14,6,15), X(7,16,8,17), X(9,18,10,1), '
             'X(11,2,12,3), X(13,4,14,5), X(15,6,16,7), X(17,8,18,9)]')


def write_config(directory, max_states=16384, coefficients='Z'):
    path = os.path.join(str(directory), 'KH_config.xml')
    with open(path, 'w', encoding='utf-8') as f:
        f.write(f"""<?xml version="1.0" encoding="UTF-8"?>
<KH_config>
    <VERSION>test</VERSION>
    <LOG_DIR>{os.path.join(str(directory), 'logs')}</LOG_DIR>
    <ATLAS_TABLE>{ATLAS}</ATLAS_TABLE>
    <MAX_STATES>{max_states}</MAX_STATES>
    <COEFFICIENTS>{coefficients}</COEFFICIENTS>
    <WORKERS>1</WORKERS>
    <H_EXPANSION_MAX_ORDER>16</H_EXPANSION_MAX_ORDER>
</KH_config>
""")
    return path


@pytest.fixture
def config_path(tmp_path, monkeypatch):
    monkeypatch.delenv('KH_TABLE', raising=False)
    return write_config(tmp_path)


@pytest.fixture
def api(config_path):
    kh_api = KHApi(KHConfig(config_path))
    yield kh_api
    kh_api.close_session()


@pytest.fixture
def trefoil(api):
    return api.parse_pd(TREFOIL, '3_1')


@pytest.fixture
def entries(api):
    return api.load_table(ATLAS)


@pytest.fixture
def kinked_torus_knot(api):
    return api.r1_insertions(api.parse_pd(TORUS_2_9, '9_1'))[0]
