# Copyright (C) 2021 delayctl contributors
#
# This file is part of delayctl.
#
# delayctl is free software: you can redistribute it and/or modify
# it under the terms of the GNU Lesser General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# delayctl is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Lesser General Public License for more details.
#
# You should have received a copy of the GNU Lesser General Public License
# along with delayctl.  If not, see <http://www.gnu.org/licenses/>.

from importlib import resources
import math

import pytest

from delayctl import UserError, parse_csv, read_table


def _path(name):
    return resources.path('tests.data.parse_csv_is_robust', name)

class TestParseCSV:

    def _parse(self, name):
        with _path(name) as path:
            return list(parse_csv(path))

    @pytest.mark.parametrize('name', (
        # Autodetect encoding
        'utf8.csv',
        'utf8_bom.csv',

        # Autodetect line ending
        'dos.csv',

        # Autodetect quotes and separators
        'semicolon_separator.csv',
        'tab_separator.csv',
        'some_dquote.csv',

        # Ignore empty lines
        'empty_lines.csv',
    ))
    def test_is_robust(self, name):
        assert self._parse(name) == [
            ['k', 't', 'x1'],
            ['0', '0.0', '1.5'],
        ]

    def test_trim(self):
        assert self._parse('untrimmed_value.csv') == [
            ['k', 't', 'x1'],
            ['0', '0.0', '1.5'],
        ]

    def test_missing_value(self):
        with pytest.raises(UserError) as ex:
            self._parse('missing_value.csv')
        assert 'Line 2, column 2 (1-based) is empty' in str(ex.value)

    def test_column_count(self):
        with pytest.raises(UserError) as ex:
            self._parse('column_count.csv')
        assert 'Line 3 (1-based) has 2 columns, expected 3' in str(ex.value)

    def test_empty(self):
        with pytest.raises(UserError) as ex:
            self._parse('empty.csv')
        assert 'is empty' in str(ex.value)

class TestReadTable:

    def test_mixed_types(self):
        with _path('mixed_types.csv') as path:
            table = read_table(path)
        assert list(table.columns) == ['k', 't', 'status']
        assert table['k'].dtype == float
        assert table['t'][0] == 0
        assert math.isnan(table['t'][1])
        assert list(table['status']) == ['feasible', 'infeasible']

    def test_duplicate_header(self):
        with _path('duplicate_header.csv') as path:
            with pytest.raises(UserError) as ex:
                read_table(path)
        assert 'duplicate column names: t' in str(ex.value)
