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

import csv
import logging

import pandas as pd

from delayctl._util import open_text, UserError, join_lines


# Separators of trace tables as written by delayctl or re-saved by a
# spreadsheet
_SEPARATORS = ',;\t'

def parse_csv(path):
    '''
    Parse a trace or search table

    Encoding and line endings are detected, the separator is taken from the
    header line. Empty lines are skipped.

    Parameters
    ----------
    path : ~pathlib.Path

    Yields
    ------
    List[str]
        Rows, header first, values stripped of outer whitespace.
    '''
    with open_text(path) as f:
        lines = [
            (line_number, line.rstrip('\r\n'))
            for line_number, line in enumerate(f, start=1)
            if line.strip()
        ]
    if not lines:
        raise UserError(f'csv file {path} is empty; it must at least have a header line')

    header = lines[0][1]
    separator = max(_SEPARATORS, key=header.count)
    logging.debug(f'Reading {path} with separator {separator!r}')

    column_count = None
    for line_number, line in lines:
        row = [value.strip() for value in next(csv.reader([line], delimiter=separator))]
        if column_count is None:
            column_count = len(row)
        if len(row) != column_count:
            raise UserError(
                f'Line {line_number} (1-based) has {len(row)} columns, '
                f'expected {column_count}. Line:\n{line}'
            )
        for column, value in enumerate(row, start=1):
            if not value:
                raise UserError(join_lines(
                    f'''
                    Line {line_number}, column {column} (1-based) is empty;
                    write nan for missing numbers. Line:
                    '''
                ) + f'\n{line}')
        yield row

def read_table(path):
    '''
    Read a csv file written by delayctl into a DataFrame

    Columns whose values all parse as float (``nan`` and ``inf`` included)
    become float columns, others stay str.

    Parameters
    ----------
    path : ~pathlib.Path

    Returns
    -------
    pandas.DataFrame
    '''
    rows = list(parse_csv(path))
    header = rows[0]
    duplicates = sorted({name for name in header if header.count(name) > 1})
    if duplicates:
        raise UserError(f'{path} has duplicate column names: {", ".join(duplicates)}')
    table = pd.DataFrame(rows[1:], columns=header, dtype=object)
    for column in header:
        try:
            table[column] = table[column].astype(float)
        except ValueError:
            table[column] = table[column].astype(str)
    return table
