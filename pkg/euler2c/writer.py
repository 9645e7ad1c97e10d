"""
CSV and JSON output of records.
"""
import csv
import json
from logging import getLogger
import sys
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

import numpy as np

from euler2c import config
from euler2c.dynamics import (
    PhaseState, Trajectory, regularized_energy, to_cartesian)

logger = getLogger(__name__)

SCAN_FIELDS = ['mu', 'g', 'c', 'region', 'rotation', 'tau_xi', 'tau_eta']
FAMILY_FIELDS = ['c', 'g', 'region']
TRAJECTORY_FIELDS = ['tau', 'lambda', 'nu', 'p_lambda', 'p_nu',
                     'q1', 'q2', 'K_residual']


def format_real(value: Optional[float], exact: bool = False) -> str:
    """
    Format an extended real.

    Infinity is written as 'inf' and an exact zero sentinel as '0-exact',
    other values with 17 significant digits.

    Examples
    --------
    >>> format_real(float('inf'))
    'inf'
    >>> format_real(0.0, exact=True)
    '0-exact'
    >>> format_real(0.25)
    '0.25'
    """
    if value is None:
        return ''
    if np.isinf(value):
        return 'inf' if value > 0 else '-inf'
    if exact and value == 0.0:
        return '0-exact'

    return config.float_format.format(float(value))


def jsonable(value: Any) -> Any:
    """
    Convert floats (including infinities) and containers for json.dumps.
    """
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if np.isfinite(value):
            return float(value)
        return format_real(float(value))

    return value


class RecordWriter(object):
    """
    Writes records to a text stream, one CSV row or one JSON object
    per call.

    Attributes
    ----------
    fp: TextIO
        The stream to output to.
    fields: list[str]
        The CSV columns.
    """

    def __init__(self, fp: Optional[TextIO] = None,
                 fields: Optional[Sequence[str]] = None):
        self.set_fp(fp)
        self.fields = list(fields or [])
        self._csv = None

    def set_fp(self, fp: Optional[TextIO]) -> None:
        """
        Set (or change if already set) the output stream.

        Parameters
        ----------
        fp: TextIO, None
            The stream to output to, or sys.stdout if None.
        """
        self.fp = fp if fp is not None else sys.stdout
        self._csv = None

    def print_header(self) -> None:
        self._csv = csv.writer(self.fp, lineterminator='\n')
        self._csv.writerow(self.fields)

    def print_row(self, row: Dict[str, Any]) -> None:
        """
        Output a single CSV line; missing columns are left empty.
        """
        if self._csv is None:
            self.print_header()

        self._csv.writerow([row.get(name, '') for name in self.fields])

    def print_rows(self, rows: Iterable[Dict[str, Any]]) -> int:
        n = 0
        for row in rows:
            self.print_row(row)
            n += 1

        return n

    def print_json(self, obj: Dict[str, Any]) -> None:
        """
        Output a single JSON object with the schema version.
        """
        record = {'schema_version': config.schema_version}
        record.update(obj)
        self.fp.write(json.dumps(jsonable(record), sort_keys=True))
        self.fp.write('\n')


def trajectory_rows(traj: Trajectory) -> List[Dict[str, str]]:
    """
    Rows of the trajectory export, one per accepted step.
    """
    rows = []
    for tau, y in zip(traj.taus, traj.states):
        state = PhaseState.from_array(y)
        q = to_cartesian(state)
        rows.append({
            'tau': format_real(tau),
            'lambda': format_real(state.lam),
            'nu': format_real(state.nu),
            'p_lambda': format_real(state.p_lam),
            'p_nu': format_real(state.p_nu),
            'q1': format_real(q.q1),
            'q2': format_real(q.q2),
            'K_residual': format_real(
                regularized_energy(traj.params, traj.c, state)),
        })

    return rows
