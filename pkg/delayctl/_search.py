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

'''
One-dimensional searches: maximum sampling period, delay sweep, maximum event
threshold
'''

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
import json
import logging
import math

import attr
import numpy as np
import pandas as pd

from delayctl._lmi import build_phi, build_phi_e, build_psi
from delayctl._model import PidPlant
from delayctl._sdp import FeasibilityProblem, solve_feasibility
from delayctl._synthesis import (
    map_gains, choose_delays, map_pid_gains, choose_pid_delay
)
from delayctl._util import UserError, NumericalError, join_lines


@attr.s(slots=True, frozen=True, repr=False)
class SearchReport:

    '''
    Outcome of a parameter search

    Parameters
    ----------
    parameter : str
        Searched parameter: 'h', 'q' or 'sigma'.
    history : Sequence[Tuple[float, str, float]]
        Probes in the order they were made: value, feasibility status and
        largest LMI eigenvalue.
    best : float or None
        Largest feasible value, None if none was found.
    certificate : Certificate or None
        Certificate at best.
    status : str
        'ok', 'local boundary', 'infeasible range', 'sigma=0 infeasible' or
        'no positive sigma'.
    table : pandas.DataFrame or None
        Per-q results of a delay sweep.
    controller : SampledController or SampledPidController or None
        Controller at best.
    certificates : Dict[int, Certificate]
        Certificate at the best h of each q of a delay sweep.
    '''

    parameter = attr.ib()
    history = attr.ib(converter=tuple)
    best = attr.ib()
    certificate = attr.ib(default=None)
    status = attr.ib(default='ok')
    table = attr.ib(default=None)
    controller = attr.ib(default=None)
    certificates = attr.ib(default=attr.Factory(dict))

    def __repr__(self):
        return f'SearchReport({self.parameter!r}, best={self.best!r}, status={self.status!r})'

    @property
    def probes(self):
        return len(self.history)

    def to_frame(self):
        'Probe history as a DataFrame with columns parameter, status, t'
        return pd.DataFrame(list(self.history), columns=[self.parameter, 'status', 't'])

    def to_dict(self):
        return {
            'parameter': self.parameter,
            'best': self.best,
            'status': self.status,
            'history': [list(probe) for probe in self.history],
            'controller': self.controller.to_dict() if self.controller else None,
            'table': json.loads(self.table.to_json(orient='records')) if self.table is not None else None,
        }

    def write(self, directory, stem='search'):
        '''
        Write the report to directory

        Writes ``{stem}.csv`` (the sweep table, else the probe history),
        ``{stem}.json`` and, if any, the certificate to
        ``{stem}_certificate.json``. A delay sweep also writes the
        certificate of each q to ``{stem}_q{q}_certificate.json`` and lists
        it in a cert_file column, nan where q has none.

        Returns
        -------
        List[~pathlib.Path]
            Written files.
        '''
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        data = self.to_dict()
        names = {q: f'{stem}_q{q}_certificate.json' for q in self.certificates}
        if self.table is None:
            table = self.to_frame()
        else:
            table = self.table.assign(cert_file=[names.get(int(q)) for q in self.table['q']])
            data['table'] = json.loads(table.to_json(orient='records'))
        paths = [directory / f'{stem}.csv', directory / f'{stem}.json']
        table.to_csv(paths[0], index=False, na_rep='nan')
        paths[1].write_text(json.dumps(data, indent=2))
        if self.certificate is not None:
            paths.append(directory / f'{stem}_certificate.json')
            paths[-1].write_text(json.dumps(self.certificate.to_dict(), indent=2))
        for q, certificate in sorted(self.certificates.items()):
            paths.append(directory / names[q])
            paths[-1].write_text(json.dumps(certificate.to_dict(), indent=2))
        return paths

@attr.s(slots=True, frozen=True)
class _Probe:
    value = attr.ib()
    status = attr.ib()
    t = attr.ib()
    certificate = attr.ib(default=None)
    controller = attr.ib(default=None)

    @property
    def feasible(self):
        return self.status == 'feasible'

def _solve(lmi):
    try:
        outcome = solve_feasibility(FeasibilityProblem(lmi))
    except NumericalError as ex:
        logging.warning(f'Probe treated as inconclusive: {ex}')
        return 'inconclusive', math.nan, None
    return outcome.status, outcome.t, outcome.certificate

class _SamplingPeriodProbe:

    'Feasibility at h, with delays and gains regenerated for every h'

    def __init__(self, plant, ideal, alpha, q, sigma):
        self._plant = plant
        self._ideal = ideal
        self._alpha = alpha
        self._q = q
        self._sigma = sigma
        self._last_delays = None

    def _delays(self, h):
        if self._q is not None:
            return self._q
        if isinstance(self._plant, PidPlant):
            delays = choose_pid_delay(h)
        else:
            delays = choose_delays(h, self._ideal.r)
        if self._last_delays is not None and delays != self._last_delays:
            logging.info(join_lines(
                f'''
                Delay rule changed delays from {self._last_delays} to
                {delays} at h={h:.6g}; gains rebuilt
                '''
            ))
        self._last_delays = delays
        return delays

    def __call__(self, h):
        try:
            delays = self._delays(h)
        except UserError as ex:
            logging.info(f'Probe h={h:.6g} infeasible: {ex}')
            return _Probe(h, 'infeasible', math.nan)
        if isinstance(self._plant, PidPlant):
            controller = map_pid_gains(self._ideal, h, delays, sigma=self._sigma or 0.0)
            lmi = build_psi(self._plant, controller, self._alpha)
        else:
            controller = map_gains(self._ideal, h, delays)
            if self._sigma is None:
                lmi = build_phi(self._plant, controller, self._alpha)
            else:
                lmi = build_phi_e(self._plant, controller, self._alpha, self._sigma)
        status, t, certificate = _solve(lmi)
        logging.info(f'Probe h={h:.6g}, q={delays}: {status}')
        return _Probe(h, status, t, certificate, controller)

def _sign_changes(probes):
    feasible = [probe.feasible for probe in sorted(probes, key=lambda probe: probe.value)]
    return sum(a != b for a, b in zip(feasible, feasible[1:]))

def _check_range(name, range_, lower=0.0):
    lo, hi = range_
    if not (lo >= lower and lo <= hi and math.isfinite(hi)):
        raise UserError(f'Invalid {name} range [{lo}, {hi}]')
    return float(lo), float(hi)

def max_h(plant, ideal, alpha, h_range, q=None, sigma=None, rel_tol=1e-3, scan=0):
    '''
    Find the largest sampling period for which the stability LMI is feasible

    Bisects on the geometric midpoint of a bracket ``[h_lo, h_hi]`` whose lower
    end is feasible, then probes 3 interior points of ``[h_start, best]`` to
    detect non-monotone feasibility.

    Parameters
    ----------
    plant : LtiPlant or PidPlant
    ideal : DerivativeController or PidController
        Matching the plant.
    alpha : float
        Decay rate.
    h_range : Tuple[float, float]
        Search range, ``0 < h_lo <= h_hi``.
    q : Sequence[int] or int or None
        Fixed delays (an int for PID plants). None selects the rule-based
        delays at every probe.
    sigma : float or None
        Event threshold. For LTI plants None certifies the sampled-data
        controller, a value the event-triggered one.
    rel_tol : float
        Stop when ``h_hi / h_lo - 1 <= rel_tol``.
    scan : int
        If h_lo is infeasible, probe this many geometrically spaced points to
        find a feasible lower end instead of giving up.

    Returns
    -------
    SearchReport
    '''
    lo, hi = _check_range('h', h_range)
    if lo <= 0:
        raise UserError(f'h range must be positive, got [{lo}, {hi}]')
    probe = _SamplingPeriodProbe(plant, ideal, alpha, q, sigma)
    history = []

    def run(h):
        result = probe(h)
        history.append(result)
        return result

    best = run(lo)
    if not best.feasible and scan > 0 and hi > lo:
        logging.info(f'h_lo={lo:.6g} infeasible, scanning {scan} points of [{lo:.6g}, {hi:.6g}]')
        grid = np.geomspace(lo, hi, scan + 2)[1:-1]
        feasible = None
        for h in grid:
            result = run(h)
            if result.feasible:
                feasible = result
            elif feasible is not None:
                hi = h
                break
        if feasible is not None:
            best = feasible
            lo = feasible.value
    if not best.feasible:
        logging.warning(f'No feasible h found in [{h_range[0]:.6g}, {h_range[1]:.6g}]')
        return _report('h', history, None, 'infeasible range')
    start = lo

    if hi > lo:
        top = run(hi)
        if top.feasible:
            best = top
            lo = hi
        while hi / lo - 1 > rel_tol:
            result = run(math.sqrt(lo * hi))
            if result.feasible:
                best = result
                lo = result.value
            else:
                hi = result.value
        logging.info(f'Bracket [{lo:.6g}, {hi:.6g}] after {len(history)} probes')

        if best.value > start:
            for h in np.geomspace(start, best.value, 5)[1:-1]:
                run(h)

    status = 'ok'
    changes = _sign_changes([result for result in history if result.value >= start])
    if changes > 1:
        status = 'local boundary'
        logging.warning(join_lines(
            f'''
            Feasibility is not monotone in h ({changes} sign changes over the
            probes); best h={best.value:.6g} is a local boundary
            '''
        ))
    return _report('h', history, best, status)

def _report(parameter, history, best, status, table=None):
    return SearchReport(
        parameter,
        [(probe.value, probe.status, probe.t) for probe in history],
        best.value if best else None,
        best.certificate if best else None,
        status,
        table,
        best.controller if best else None,
    )

def _delays_of_step(plant, ideal, q):
    if isinstance(plant, PidPlant):
        return q
    return tuple(i * q for i in range(1, ideal.r))

def sweep_q(plant, ideal, alpha, sigma, q_range, h_range, workers=None, scan=0):
    '''
    Run `max_h` for each delay in a range

    For LTI plants the swept q is the delay step: ``q_i = i q``.

    Parameters
    ----------
    q_range : Tuple[int, int]
        Inclusive range of delays.
    workers : int or None
        Maximum number of concurrent searches.

    Returns
    -------
    SearchReport
        best is the q with the largest best h; table has columns q, best_h,
        margin, status, sorted by q; certificates holds the certificate of
        every q with a feasible h.
    '''
    q_lo, q_hi = (int(q) for q in _check_range('q', q_range, lower=1))
    qs = list(range(q_lo, q_hi + 1))

    def search(q):
        return max_h(
            plant, ideal, alpha, h_range, q=_delays_of_step(plant, ideal, q),
            sigma=sigma, scan=scan,
        )

    with ThreadPoolExecutor(max_workers=workers) as executor:
        reports = list(executor.map(search, qs))

    table = pd.DataFrame({
        'q': qs,
        'best_h': [report.best if report.best is not None else math.nan for report in reports],
        'margin': [report.certificate.margin if report.certificate else math.nan for report in reports],
        'status': [report.status for report in reports],
    })
    history = [(q, report.status, report.best) for q, report in zip(qs, reports)]
    certificates = {
        q: report.certificate for q, report in zip(qs, reports)
        if report.certificate is not None
    }
    feasible = table.dropna(subset=['best_h'])
    if feasible.empty:
        logging.warning(f'No q in [{q_lo}, {q_hi}] admits a feasible h')
        return SearchReport('q', history, None, status='infeasible range', table=table)
    index = int(feasible['best_h'].idxmax())
    best = reports[index]
    logging.info(f'Best delay q={qs[index]} with h={best.best:.6g}')
    return SearchReport(
        'q', history, qs[index], best.certificate, 'ok', table, best.controller,
        certificates,
    )

def max_sigma(plant, ctrl, alpha, sigma_range=(0, 1), rel_tol=1e-3, sigma_tol=1e-6):
    '''
    Find the largest event threshold for which the controller is certified

    σ = 0 is checked first: the sampled-data LMI for LTI plants, Ψ with σ = 0
    for PID plants. Then bisects on σ.

    Parameters
    ----------
    plant : LtiPlant or PidPlant
    ctrl : SampledController or SampledPidController
    alpha : float
    sigma_range : Tuple[float, float]
        Within ``[0, 1]``; 1 itself is never probed.
    rel_tol : float
        Stop when ``σ_hi - σ_lo <= rel_tol σ_hi``.
    sigma_tol : float
        Stop once ``σ_hi <= sigma_tol``. If no σ > 0 was certified by then,
        the report holds σ = 0 with status 'no positive sigma'.

    Returns
    -------
    SearchReport
    '''
    lo, hi = _check_range('sigma', sigma_range)
    if hi > 1:
        raise UserError(f'sigma range must lie within [0, 1], got [{lo}, {hi}]')
    pid = isinstance(plant, PidPlant)
    history = []

    def run(sigma):
        if pid:
            controller = ctrl.with_sigma(sigma)
            lmi = build_psi(plant, controller, alpha)
        elif sigma == 0:
            controller = ctrl
            lmi = build_phi(plant, ctrl, alpha)
        else:
            controller = ctrl
            lmi = build_phi_e(plant, ctrl, alpha, sigma)
        status, t, certificate = _solve(lmi)
        logging.info(f'Probe sigma={sigma:.6g}: {status}')
        result = _Probe(sigma, status, t, certificate, controller)
        history.append(result)
        return result

    best = run(0.0)
    if not best.feasible:
        logging.warning('Controller is not certified even without event triggering')
        return _report('sigma', history, None, 'sigma=0 infeasible')
    if hi == 0:
        return _report('sigma', history, best, 'ok')

    if lo > 0:
        result = run(lo)
        if not result.feasible:
            return _report('sigma', history, best, 'infeasible range')
        best = result
    if hi < 1:
        result = run(hi)
        if result.feasible:
            return _report('sigma', history, result, 'ok')
    while hi - lo > rel_tol * hi and hi > sigma_tol:
        result = run((lo + hi) / 2)
        if result.feasible:
            best = result
            lo = result.value
        else:
            hi = result.value
    if best.value == 0:
        logging.warning(f'No sigma in (0, {hi:.3g}] is certified, only sigma=0')
        return _report('sigma', history, best, 'no positive sigma')
    logging.info(f'Largest certified sigma={best.value:.6g}')
    return _report('sigma', history, best, 'ok')
