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
Khovanov complexes of knot diagrams, wall-crossing morphisms and the
finite-type audit, with a command-line front end.
"""
import argparse
import itertools
import logging
import os
import sys
import time

try:
    from KH_config import KHConfig
except ModuleNotFoundError:
    sys.path.insert(0, os.path.dirname(__file__))
    from KH_config import KHConfig

from helpers import LOG_DATE_FORMAT, CheckFailure, KHError, logger_global, render_records, render_table
from kh_apis.atlas_KH_API import AtlasAPI
from kh_apis.complex_KH_API import ComplexAPI
from kh_apis.diagram_KH_API import DiagramAPI
from kh_apis.khovanov_KH_API import KhovanovAPI
from kh_apis.polynomial_KH_API import PolynomialAPI
from kh_apis.wallcross_KH_API import WallCrossAPI

_SESSION_COUNTER = itertools.count()


class KHApi(DiagramAPI, PolynomialAPI, ComplexAPI, KhovanovAPI, WallCrossAPI, AtlasAPI):
    """
    Base API class for mixin classes.

    Attributes
    ----------
    KH_CONFIG : class
        an instance of KHConfig
    session_logger : Logger
        collects the flagged records of the session, None when disabled

    Methods
    -------
    init_logger(session_file)
        None
    init_external_logger(session_logger)
        None
    close_session()
        None
    """

    def __init__(self, kh_config, session_log=True):
        """
        Parameters
        ----------
        kh_config : KHConfig, obligatory
            an instance of KHConfig
        session_log : bool, optional
            if False no session file is written
        """
        self.KH_CONFIG = kh_config
        self.session_logger = None
        self.session_file = None

        if session_log:
            session_log_dir = os.path.join(self.KH_CONFIG.get_log_path(), "sessions")
            if not os.path.exists(session_log_dir):
                os.makedirs(session_log_dir)
            session_log_path = os.path.join(session_log_dir, f"kh_session-{time.strftime('%Y%m%d-%H%M%S')}-"
                                                             f"{os.getpid()}-{next(_SESSION_COUNTER)}.log")
            self.init_logger(session_log_path)

    def init_logger(self, session_file):
        """
        Method used for initializing the logger collecting the flagged records
        of a session (discrepancies and failed checks).

        Parameters
        ----------
        session_file: str obligatory
            the path to the log file, it does not need to exist.
        """
        if len(session_file.strip()) != 0:
            formatter = logging.Formatter('%(asctime)s : %(message)s', datefmt=LOG_DATE_FORMAT)
            handler = logging.FileHandler(session_file, encoding='utf-8')
            handler.setFormatter(formatter)

            self.session_file = session_file
            self.session_logger = logging.getLogger(f"session_KH.{os.path.basename(session_file)}")
            self.session_logger.setLevel(logging.INFO)
            self.session_logger.propagate = False
            self.session_logger.addHandler(handler)
            self.session_logger.info("START SESSION")

    def init_external_logger(self, session_logger):
        """
        The method allows for passing an external session logger to the instance of the class.

        Parameters
        ----------
        session_logger: Logger (see logging) obligatory
            an instance of the logger class.
        """
        self.session_logger = session_logger

    def close_session(self):
        if self.session_logger is None:
            return
        self.session_logger.info("END SESSION")
        for handler in list(self.session_logger.handlers):
            handler.close()
            self.session_logger.removeHandler(handler)
        self.session_logger = None


def parse_args(argv=None):
    """
    Get parameters from user
    """
    default_xml = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'KH_config.xml')
    parser = argparse.ArgumentParser(description='Khovanov wall-crossing workbench')
    parser.add_argument('--xml_path', '-x', type=str, default=default_xml, help='path to config xml file')
    parser.add_argument('--table', type=str, default=None, help='knot table, overrides KH_TABLE and the config')
    parser.add_argument('--coefficients', choices=('Z', 'Z/2'), default=None)
    parser.add_argument('--max-states', type=int, default=None, help='guard on 2^crossings')
    parser.add_argument('--format', choices=('records', 'table'), default='records')

    verbs = parser.add_subparsers(dest='verb', required=True)
    for verb in ('jones', 'homology'):
        verbs.add_parser(verb).add_argument('input', help='PD code or knot table name')
    for verb in ('split', 'wall'):
        sub = verbs.add_parser(verb)
        sub.add_argument('input', help='PD code or knot table name')
        sub.add_argument('--crossing', type=int, required=True)
    cone = verbs.add_parser('cone')
    cone.add_argument('input', help='PD code or knot table name')
    cone.add_argument('--double', type=str, required=True, help='comma separated crossing indices')
    cone.add_argument('--fold-order', type=str, default=None, help='comma separated permutation of the double points')
    audit = verbs.add_parser('audit')
    audit.add_argument('--max-crossings', type=int, required=True)
    audit.add_argument('--codim', type=int, required=True)
    audit.add_argument('--workers', type=int, default=None)
    invariance = verbs.add_parser('invariance')
    invariance.add_argument('--table', type=str, default=argparse.SUPPRESS, help='knot table to check')
    expand = verbs.add_parser('expand')
    expand.add_argument('input', help='PD code or knot table name')
    expand.add_argument('--order', type=int, required=True)

    return parser.parse_args(argv)


def _indices(text):
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise KHError(f"expected comma separated integers, got {text!r}")


def _diagram(kh_api, text, table):
    if text.strip().upper().startswith('PD'):
        return kh_api.parse_pd(text)
    entry = kh_api.find_entry(text, kh_api.load_table(table))
    return kh_api.parse_pd(entry.pd, entry.name)


def _emit(records, fmt):
    print(render_table(records) if fmt == 'table' else render_records(records))


def _dispatch(kh_api, args, table):
    """
    Runs one verb and returns the exit status.
    """
    verb = args.verb
    if verb == 'jones':
        d = _diagram(kh_api, args.input, table)
        jones = kh_api.jones_unnormalized(d)
        if args.format == 'table':
            _emit([{'diagram': d.name or kh_api.render_pd(d), 'jones': str(jones)}], args.format)
        else:
            print(jones)
        return 0
    if verb == 'homology':
        groups = kh_api.homology(kh_api.build_ckh(_diagram(kh_api, args.input, table)))
        _emit(groups.to_records(), args.format)
        return 0
    if verb == 'split':
        split = kh_api.crossing_split(_diagram(kh_api, args.input, table), args.crossing)
        _emit([{'crossing': split.k, 'c0_generators': split.c0.total_rank(),
                'c1_generators': split.c1.total_rank(), 'd01_entries': len(split.d01),
                'lower_left_entries': len(split.lower_left),
                'upper_triangular': str(split.is_upper_triangular()).lower()}], args.format)
        return 0 if split.is_upper_triangular() else 1
    if verb == 'wall':
        wall = kh_api.wall_morphism(_diagram(kh_api, args.input, table), args.crossing)
        _emit([{'crossing': wall.k, 'source_generators': wall.source.total_rank(),
                'target_generators': wall.target.total_rank(), 'chain_map': 'pass'}], args.format)
        return 0
    if verb == 'cone':
        d = _diagram(kh_api, args.input, table)
        order = _indices(args.fold_order) if args.fold_order else None
        report = kh_api.finite_type_report(kh_api.mark_singular(d, _indices(args.double)), order)
        rows = report.cone_homology.to_records()
        if rows:
            _emit(rows, args.format)
            print()
        _emit([report.to_record()], args.format)
        return 0 if report.chi_check else 1
    if verb == 'audit':
        summary = kh_api.audit_subcategory(args.max_crossings, args.codim, kh_api.load_table(table), args.workers)
        rows = [report.to_row() for report in summary.reports]
        _emit(rows, args.format)
        print()
        _emit([summary.summary_record()], 'records')
        return 1 if summary.discrepancies else 0
    if verb == 'invariance':
        report = kh_api.invariance_suite(kh_api.load_table(table))
        _emit(report.to_records(), args.format)
        return 0 if report.passed else 1
    if verb == 'expand':
        jones = kh_api.jones_unnormalized(_diagram(kh_api, args.input, table))
        coefficients = kh_api.h_expansion(jones, args.order)
        _emit([{'k': k, 'c_k': str(c)} for k, c in enumerate(coefficients)], args.format)
        return 0
    raise KHError(f"unknown verb {verb}")


def run(argv=None):
    """
    Runs one command line. Exit status 0 on success, 1 when a check fails,
    2 on an input error.
    """
    args = parse_args(argv)
    try:
        kh_config = KHConfig(args.xml_path)
        if args.max_states is not None:
            kh_config.set_max_states(args.max_states)
        if args.coefficients is not None:
            kh_config.set_coefficients(args.coefficients)
        kh_api = KHApi(kh_config)
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    table = args.table or kh_config.get_atlas_path()
    try:
        return _dispatch(kh_api, args, table)
    except CheckFailure as e:
        logger_global.error(f"Check failed: {e}")
        print(f"check failed: {e}", file=sys.stderr)
        return 1
    except KHError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    finally:
        kh_api.close_session()


if __name__ == "__main__":
    sys.exit(run())
