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
import os
import time

try:
    from KH_config import KHConfig
except ModuleNotFoundError:
    import sys

    sys.path.insert(0, os.path.dirname(__file__))
    from KH_config import KHConfig

LOG_DATE_FORMAT = '%d-%b-%y %H:%M:%S'


class KHError(Exception):
    """
    Base class of every error raised by the workbench. Errors deriving directly
    from it are input errors.
    """


class CheckFailure(KHError):
    """
    An internal consistency check did not hold (d^2 = 0, chain-map identity, ...).
    """


def state_string(state):
    """
    The function renders a bit vector as a string of 0 and 1.

    Parameters
    ----------
    state : tuple, obligatory
        bits of a cube state

    Returns
    ------
    str
        e.g. '011'
    """
    return ''.join(str(bit) for bit in state)


def ones_below(state, position):
    """
    The function counts the 1s of a state strictly below a position.

    Parameters
    ----------
    state : tuple, obligatory
        bits of a cube state
    position : int, obligatory
        index in the state

    Returns
    ------
    int
        number of 1s at indices < position
    """
    return sum(state[:position])


def split_flagged_line(line, marker):
    """
    Splits a flagged session line `<marker> <reason>, <stratum>` into its
    reason and stratum id. Stratum ids may contain commas, reasons may not.
    """
    reason, _, stratum = line[line.find(marker) + len(marker):].strip().partition(', ')
    return reason, stratum


def render_records(records):
    """
    The function renders a list of dictionaries as structured text: one
    `key: value` line per field, records separated by a blank line.

    Parameters
    ----------
    records : list, obligatory
        list of dictionaries, keys are rendered in insertion order

    Returns
    ------
    str
        the rendered text
    """
    blocks = []
    for record in records:
        blocks.append('\n'.join(f"{key}: {value}" for key, value in record.items()))
    return '\n\n'.join(blocks)


def render_table(records):
    """
    The function renders a list of dictionaries sharing the same keys as a
    tab separated table with a header row.

    Parameters
    ----------
    records : list, obligatory
        list of dictionaries

    Returns
    ------
    str
        the rendered table, empty string for no records
    """
    if not records:
        return ''
    header = list(records[0].keys())
    lines = ['\t'.join(header)]
    for record in records:
        lines.append('\t'.join(str(record[key]) for key in header))
    return '\n'.join(lines)


def create_logger_global(log_dir):
    """
    The function attaches LOG_DIR/global-<timestamp>.log to the
    multiprocessing logger, which is shared with the audit workers. A second
    call in the same process returns the logger unchanged.

    Parameters
    ----------
    log_dir : str, obligatory
        the log directory, it has to exist

    Returns
    ------
    Logger
    """
    logger = multiprocessing.get_logger()
    logger.setLevel(logging.DEBUG)
    if logger.handlers:
        return logger
    handler = logging.FileHandler(os.path.join(log_dir, f"global-{time.strftime('%Y%m%d-%H%M%S')}.log"),
                                  encoding='utf-8')
    handler.setFormatter(logging.Formatter('%(asctime)s : %(levelname)s : %(message)s', datefmt=LOG_DATE_FORMAT))
    logger.addHandler(handler)
    return logger


def _bootstrap_config():
    here = os.path.dirname(os.path.abspath(__file__))
    for candidate in (os.path.join(here, 'KH_config.xml'), 'KH_config.xml'):
        if os.path.exists(candidate):
            return KHConfig(candidate)
    raise KHError("KH_config.xml not found next to helpers.py or in the working directory")


logger_global = create_logger_global(_bootstrap_config().get_log_path())
