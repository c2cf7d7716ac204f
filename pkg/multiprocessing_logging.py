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


# queue based logging for the parallel audit, after
# https://docs.python.org/3/howto/logging-cookbook.html#logging-to-a-single-file-from-multiple-processes


import logging
import logging.handlers
import sys
import traceback
from os import path

AUDIT_LOGGER = 'audit_KH'


def listener_configurer(log_name, log_dir, formatter=None):
    """
    Returns the logger written by the listener process, a single file handler
    on LOG_DIR/<log_name>.log. Calling it twice for the same file does not
    duplicate the handler.

    Parameters
    ----------
    log_name : str, obligatory
        name of the logger and stem of the log file
    log_dir : str, obligatory
        directory of the log file
    formatter : Formatter, optional
        defaults to `<date> : <message>`

    Returns
    ------
    Logger
    """
    logger = logging.getLogger(log_name)
    logger.setLevel(logging.INFO)
    log_file = path.abspath(path.join(log_dir, f'{log_name}.log'))
    if any(getattr(handler, 'baseFilename', None) == log_file for handler in logger.handlers):
        return logger
    handler = logging.FileHandler(log_file, encoding='utf-8')
    handler.setFormatter(formatter or logging.Formatter('%(asctime)s : %(message)s', datefmt='%d-%b-%y %H:%M:%S'))
    logger.addHandler(handler)
    return logger


def listener_process(queue, configurer, log_name, log_file_path):
    """ Target of the listener process: writes the records arriving on the
    queue until it receives None

    Arguments:
        queue (multiprocessing.Queue): queue to monitor
        configurer (func): configures the file logger
        log_name (str): name of the log to use
        log_file_path (str): directory of the log file
    """
    logger = configurer(log_name, log_file_path)

    while True:
        try:
            record = queue.get()
            if record is None:
                break
            logger.handle(record)
        except Exception:
            print('Failure in listener_process', file=sys.stderr)
            traceback.print_exc(limit=1, file=sys.stderr)


def worker_configurer(queue):
    """ Routes the audit logger of a worker process to the queue

    Arguments:
        queue (multiprocessing.Queue): queue read by the listener

    Returns:
        logger: the worker side audit logger
    """
    logger = logging.getLogger(AUDIT_LOGGER)
    if not any(isinstance(handler, logging.handlers.QueueHandler) for handler in logger.handlers):
        logger.addHandler(logging.handlers.QueueHandler(queue))
    logger.setLevel(logging.INFO)
    logger.propagate = False
    return logger
