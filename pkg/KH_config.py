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
import xml.etree.ElementTree as ET


class KHConfig:
    """
    The class is used to map the workbench configuration from an XML file.

    Attributes
    ----------
    version : str
        configuration file version
    log_dir : str
        the directory for the global and session logs
    atlas_path : str
        the default atlas table, overridden by the KH_TABLE environment variable
    max_states : int
        guard on the number of cube states (2^n) a complex may have
    coefficients : str
        default homology coefficients, 'Z' or 'Z/2'
    workers : int
        number of processes used by the audit, 1 means serial
    h_expansion_max_order : int
        guard on the order of the h-expansion

    Methods
    -------
    get_version()
        returns the config. file version
    get_log_path()
        returns the log directory
    get_atlas_path()
        returns the atlas table path, honouring KH_TABLE
    get_max_states()
        returns int, the state guard
    get_coefficients()
        returns str, the coefficient ring
    get_workers()
        returns int, the number of audit workers
    get_h_expansion_max_order()
        returns int, the h-expansion guard
    """

    valid_coefficients = ('Z', 'Z/2')

    def __read_text(self, config, tag, default=None):
        node = config.find(tag)
        if node is None or node.text is None:
            if default is None:
                raise Exception(f"Sorry, the tag {tag} is missing in the configuration.")
            return default
        return node.text.strip(' \t\n\r')

    def __read_positive_int(self, config, tag, default):
        text = self.__read_text(config, tag, str(default))
        try:
            value = int(text)
        except ValueError:
            raise Exception(f"Sorry, {tag} has to be an integer, got: {text}")
        if value <= 0:
            raise Exception(f"Sorry, {tag} has to be positive, got: {value}")
        return value

    def __resolve(self, path):
        if os.path.isabs(path):
            return path
        return os.path.normpath(os.path.join(self.config_dir, path))

    def __init__(self, xml_path, log_dir=None):
        if not os.path.exists(xml_path):
            raise Exception(f"Sorry, the configuration file {xml_path} does not exist.")
        config = ET.parse(xml_path).getroot()
        self.config_dir = os.path.dirname(os.path.abspath(xml_path))

        self.name = self.__read_text(config, 'NAME', 'KH')
        self.version = self.__read_text(config, 'VERSION')

        self.log_dir = log_dir if log_dir is not None else self.__resolve(self.__read_text(config, 'LOG_DIR'))
        if not os.path.exists(self.log_dir):
            os.makedirs(self.log_dir)

        self.atlas_path = self.__resolve(self.__read_text(config, 'ATLAS_TABLE'))
        self.max_states = self.__read_positive_int(config, 'MAX_STATES', 2 ** 14)
        self.workers = self.__read_positive_int(config, 'WORKERS', 1)
        self.h_expansion_max_order = self.__read_positive_int(config, 'H_EXPANSION_MAX_ORDER', 16)

        self.coefficients = self.__read_text(config, 'COEFFICIENTS', 'Z')
        if self.coefficients not in self.valid_coefficients:
            raise Exception(f"Sorry, COEFFICIENTS has to be one of {self.valid_coefficients}.")

    def get_version(self):
        return self.version

    def get_log_path(self):
        return self.log_dir

    def get_atlas_path(self):
        override = os.environ.get('KH_TABLE', '').strip()
        return override if override else self.atlas_path

    def get_max_states(self):
        return self.max_states

    def set_max_states(self, max_states):
        if max_states <= 0:
            raise Exception(f"Sorry, the state guard has to be positive, got: {max_states}")
        self.max_states = max_states

    def get_coefficients(self):
        return self.coefficients

    def get_workers(self):
        return self.workers

    def get_h_expansion_max_order(self):
        return self.h_expansion_max_order

    def set_coefficients(self, coefficients):
        if coefficients not in self.valid_coefficients:
            raise Exception(f"Sorry, the coefficients have to be one of {self.valid_coefficients}.")
        self.coefficients = coefficients
