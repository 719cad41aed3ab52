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
Closed loop simulation with exact zero-order hold between samples, event
triggers and Lyapunov-Krasovskii functional diagnostics
'''

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
import logging
import math

import attr
import numpy as np
import pandas as pd
import scipy.integrate
import scipy.linalg

from delayctl._csv import read_table
from delayctl._model import PidPlant, relative_degree, stacked_output_map
from delayctl._util import UserError, join_lines, as_matrix


# T/h slack so that e.g. T=10, h=0.1 gives 101 samples despite rounding
_COUNT_SLACK = 1e-12

_MIN_RESOLUTION = 50


@attr.s(slots=True, frozen=True, repr=False)
class SimTrace:

    '''
    Sampled closed loop trajectory

    Parameters
    ----------
    t : ArrayLike[float]
        Sampling instants ``t_k = kh``.
    x : ArrayLike[float]
        States at the sampling instants, one row per instant.
    u : ArrayLike[float]
        Input applied on ``[t_k, t_{k+1})``, one row per instant.
    dense : ArrayLike[float] or None
        States on a uniform grid of each sampling interval, shape
        ``(samples, resolution + 1, n)``; ``dense[k, 0] = x[k]``.
    metadata : dict
        E.g. h and the controller.
    '''

    t = attr.ib(converter=lambda t: as_matrix(t, ndim=1))
    x = attr.ib(converter=as_matrix)
    u = attr.ib(converter=as_matrix)
    dense = attr.ib(default=None, converter=attr.converters.optional(lambda dense: as_matrix(dense, ndim=3)))
    metadata = attr.ib(factory=dict)

    def __attrs_post_init__(self):
        if not (len(self.t) == len(self.x) == len(self.u)):
            raise ValueError(join_lines(
                f'''
                t, x and u must have the same number of rows, got {len(self.t)},
                {len(self.x)} and {len(self.u)}
                '''
            ))

    def __repr__(self):
        return f'SimTrace(samples={self.samples}, n={self.x.shape[1]})'

    @property
    def samples(self):
        return len(self.t)

    @property
    def h(self):
        return self.metadata.get('h', float(self.t[1] - self.t[0]) if self.samples > 1 else math.nan)

    @property
    def resolution(self):
        return None if self.dense is None else self.dense.shape[1] - 1

    def to_frame(self, transmitted=None, V=None):
        '''
        Trace as DataFrame with columns ``k, t, x1..xn, u`` (``u1..um`` for
        multiple inputs) and optionally ``transmitted`` and ``V``
        '''
        n, m = self.x.shape[1], self.u.shape[1]
        frame = pd.DataFrame({'k': np.arange(self.samples), 't': self.t})
        for i in range(n):
            frame[f'x{i+1}'] = self.x[:, i]
        if m == 1:
            frame['u'] = self.u[:, 0]
        else:
            for i in range(m):
                frame[f'u{i+1}'] = self.u[:, i]
        if transmitted is not None:
            frame['transmitted'] = np.asarray(transmitted, dtype=int)
        if V is not None:
            frame['V'] = pd.Series(V).reindex(frame['k']).to_numpy()
        return frame

    def write_csv(self, path, transmitted=None, V=None):
        '''
        Parameters
        ----------
        path : ~pathlib.Path
        transmitted : ArrayLike[bool] or None
        V : pandas.Series or None
            Functional values indexed by k; missing instants are written as
            nan.
        '''
        self.to_frame(transmitted, V).to_csv(Path(path), index=False, na_rep='nan')

    @classmethod
    def read_csv(cls, path):
        'Read a trace written by write_csv, without its dense grid'
        table = read_table(Path(path))
        x = table[[column for column in table.columns if column[0] == 'x']].to_numpy()
        u_columns = [column for column in table.columns if column == 'u' or column[:1] == 'u' and column[1:].isdigit()]
        t = table['t'].to_numpy()
        metadata = {'h': float(t[1] - t[0])} if len(t) > 1 else {}
        return cls(t, x, table[u_columns].to_numpy(), metadata=metadata)

@attr.s(slots=True, frozen=True, repr=False)
class EventLog:

    '''
    Decisions of an event trigger on the controller-to-actuator network

    Parameters
    ----------
    transmitted : ArrayLike[bool]
        Whether the newly computed input was sent at each sampling instant.
    u_computed : ArrayLike[float]
        ``u(t_k)`` as computed by the controller.
    errors : ArrayLike[float]
        ``e_k = û_k - u(t_k)``, zero at transmissions.
    '''

    transmitted = attr.ib(converter=lambda transmitted: np.array(transmitted, dtype=bool))
    u_computed = attr.ib(converter=as_matrix)
    errors = attr.ib(converter=as_matrix)

    def __repr__(self):
        return f'EventLog(count={self.count}, samples={len(self.transmitted)})'

    @property
    def count(self):
        return int(self.transmitted.sum())

    @property
    def running_count(self):
        return np.cumsum(self.transmitted)

    def summary(self, T, h, h_reference=None):
        '''
        Workload of the sensor-to-controller and controller-to-actuator
        networks

        Parameters
        ----------
        T : float
        h : float
            Sampling period of the run.
        h_reference : float or None
            Sampling period of a periodic sampled-data controller to compare
            against; adds reductions relative to it.
        '''
        summary = {
            'samples': len(self.transmitted),
            'sensor_to_controller': sample_count(T, h),
            'controller_to_actuator': self.count,
        }
        if h_reference is not None:
            reference = sample_count(T, h_reference)
            summary['reference'] = reference
            summary['actuator_reduction'] = 1 - self.count / reference
            summary['total_reduction'] = 1 - (summary['sensor_to_controller'] + self.count) / (2 * reference)
        return summary

    def to_dict(self):
        return {
            'count': self.count,
            'transmitted': self.transmitted.tolist(),
            'u_computed': self.u_computed.tolist(),
            'errors': self.errors.tolist(),
        }

@attr.s(slots=True, frozen=True, repr=False)
class LyapunovDiagnostic:

    '''
    Lyapunov-Krasovskii functional along a trace

    Parameters
    ----------
    frame : pandas.DataFrame
        Indexed by k, with columns t, V0, V_delta0 (V_v for PID loops),
        V_delta, V_kappa, V and ``weighted = e^(2αt) V``.
    resolution : int
        Quadrature points per sampling interval.
    start : int
        First evaluated instant.
    coarse : bool
        Whether halving the resolution changed V by more than 1%.
    '''

    frame = attr.ib()
    resolution = attr.ib()
    start = attr.ib()
    coarse = attr.ib(default=False)

    def __repr__(self):
        return f'LyapunovDiagnostic(start={self.start}, resolution={self.resolution})'

    def is_monotone(self, slack=1e-6):
        'Whether ``e^(2αt_k) V(t_k)`` is non-increasing within a relative slack'
        weighted = self.frame['weighted'].to_numpy()
        return bool(np.all(np.diff(weighted) <= slack * weighted[:-1]))

def sample_count(T, h):
    '''
    Get the number of sampling instants ``⌊T/h⌋ + 1`` in ``[0, T]``
    '''
    return math.floor(T / h * (1 + _COUNT_SLACK)) + 1

def _zoh(A, B, dt):
    '''
    Exact zero-order hold discretization ``x+ = Φx + Γu``
    '''
    n, m = B.shape
    augmented = np.zeros((n + m, n + m))
    augmented[:n, :n] = A
    augmented[:n, n:] = B
    exponential = scipy.linalg.expm(augmented * dt)
    return exponential[:n, :n], exponential[:n, n:]

def _check_horizon(T, h):
    if not (math.isfinite(T) and T >= h):
        raise UserError(f'Horizon T must be at least the sampling period h={h}, got T={T}')

def _check_x0(x0, n):
    x0 = np.array(x0, dtype=float).ravel()
    if x0.shape != (n,):
        raise UserError(f'Initial state must have {n} entries, got {x0.size}')
    if not np.isfinite(x0).all():
        raise UserError(f'Initial state must be finite, got {x0}')
    return x0

def _simulate(A, B, x0, h, samples, control, resolution):
    '''
    Run the zero-order hold loop

    Parameters
    ----------
    control : Callable[[int, ~numpy.ndarray], ~numpy.ndarray]
        Input to apply on ``[t_k, t_{k+1})`` given k and ``x(t_k)``, called for
        increasing k.
    '''
    n, m = B.shape
    Phi, Gamma = _zoh(A, B, h)
    x = np.empty((samples, n))
    u = np.empty((samples, m))
    x[0] = x0
    dense = None
    if resolution is not None:
        if resolution < 1:
            raise UserError(f'Resolution must be positive, got {resolution}')
        dense = np.empty((samples, resolution + 1, n))
        Phi_fine, Gamma_fine = _zoh(A, B, h / resolution)
    for k in range(samples):
        u[k] = control(k, x[k])
        if k + 1 < samples:
            x[k+1] = Phi @ x[k] + Gamma @ u[k]
        if dense is not None:
            dense[k, 0] = x[k]
            for p in range(resolution):
                dense[k, p+1] = Phi_fine @ dense[k, p] + Gamma_fine @ u[k]
    t = np.arange(samples) * h
    return t, x, u, dense

class _EventTrigger:

    'Sends u iff its change since the last sent value exceeds σ in the Ω-norm, always at σ = 0'

    def __init__(self, sigma, Omega):
        self._sigma = sigma
        self._Omega = Omega
        self._held = None
        self.transmitted = []
        self.computed = []
        self.errors = []

    def __call__(self, u):
        if self._held is None or self._sigma == 0:
            transmit = True
        else:
            change = u - self._held
            transmit = change @ self._Omega @ change > self._sigma * (u @ self._Omega @ u)
        if transmit:
            self._held = u
        self.transmitted.append(bool(transmit))
        self.computed.append(u)
        self.errors.append(self._held - u)
        return self._held

    def log(self):
        return EventLog(self.transmitted, self.computed, self.errors)

class _DelayedOutputControl:

    '''
    ``u(t_k) = K_0 y(t_k) + Σ_i K_i y(t_k - q_i h)`` with ``y = 0`` before 0,
    optionally event-triggered
    '''

    def __init__(self, plant, ctrl, trigger=None):
        self._C = plant.C
        self._ctrl = ctrl
        self._outputs = []
        self.trigger = trigger

    def __call__(self, k, x):
        self._outputs.append(self._C @ x)
        u = self._ctrl.gains[0] @ self._outputs[k]
        for q_i, gain in zip(self._ctrl.q, self._ctrl.gains[1:]):
            if k >= q_i:
                u = u + gain @ self._outputs[k - q_i]
        if self.trigger is None:
            return u
        return self.trigger(u)

def _check_controller(plant, ctrl):
    if ctrl.gains[0].shape != (plant.m, plant.l):
        raise UserError(join_lines(
            f'''
            Controller gains must be {plant.m}×{plant.l} (m×l), got
            {ctrl.gains[0].shape}
            '''
        ))
    if relative_degree(plant, ctrl.r) != ctrl.r:
        raise UserError(f'Plant relative degree does not match the {ctrl.r} controller gains')

def simulate_sampled(plant, ctrl, x0, T, resolution=None):
    '''
    Simulate the delayed sampled-data controller

    Parameters
    ----------
    plant : LtiPlant
    ctrl : SampledController
    x0 : ArrayLike[float]
    T : float
        Horizon; the trace has ``⌊T/h⌋ + 1`` samples.
    resolution : int or None
        Dense grid points per sampling interval, None for no dense grid.

    Returns
    -------
    SimTrace
    '''
    _check_controller(plant, ctrl)
    _check_horizon(T, ctrl.h)
    x0 = _check_x0(x0, plant.n)
    control = _DelayedOutputControl(plant, ctrl)
    t, x, u, dense = _simulate(plant.A, plant.B, x0, ctrl.h, sample_count(T, ctrl.h), control, resolution)
    return SimTrace(t, x, u, dense, {'h': ctrl.h, 'controller': ctrl.to_dict()})

def simulate_event_triggered(plant, ctrl, sigma, Omega, x0, T, resolution=None):
    '''
    Simulate the delayed sampled-data controller with an event trigger on
    the control signal

    The newly computed ``u(t_k)`` is sent iff
    ``(u(t_k) - û_{k-1})ᵀ Ω (u(t_k) - û_{k-1}) > σ u(t_k)ᵀ Ω u(t_k)``, the
    first one always.

    Parameters
    ----------
    sigma : float
        In ``[0, 1)``.
    Omega : ArrayLike[float]
        m×m positive definite weight, e.g. from a certificate.

    Returns
    -------
    trace : SimTrace
        Its ``u`` is the held input ``û_k``.
    log : EventLog
    '''
    _check_controller(plant, ctrl)
    _check_horizon(T, ctrl.h)
    if not 0 <= sigma < 1:
        raise UserError(f'Event threshold sigma must be in [0, 1), got {sigma}')
    Omega = as_matrix(Omega)
    if Omega.shape != (plant.m, plant.m) or np.linalg.eigvalsh(Omega).min() <= 0:
        raise UserError(f'Omega must be a positive definite {plant.m}×{plant.m} matrix')
    x0 = _check_x0(x0, plant.n)
    control = _DelayedOutputControl(plant, ctrl, _EventTrigger(sigma, Omega))
    t, x, u, dense = _simulate(plant.A, plant.B, x0, ctrl.h, sample_count(T, ctrl.h), control, resolution)
    log = control.trigger.log()
    logging.debug(f'Event trigger sent {log.count} of {len(t)} control updates')
    metadata = {'h': ctrl.h, 'controller': ctrl.to_dict(), 'sigma': sigma}
    return SimTrace(t, x, u, dense, metadata), log

class _PidControl:

    'Sampled-data PID with running sum and q-deep delay buffer'

    def __init__(self, ctrl):
        self._ctrl = ctrl
        self._outputs = []
        self.integral = []  # x_3(t_k) = h Σ_{j<k} y(t_j)
        self.trigger = _EventTrigger(ctrl.sigma, np.eye(1))

    def __call__(self, k, x):
        ctrl = self._ctrl
        y = x[0]
        self.integral.append(self.integral[-1] + ctrl.h * self._outputs[-1] if k else 0.0)
        self._outputs.append(y)
        delayed = self._outputs[k - ctrl.q] if k >= ctrl.q else 0.0
        u = np.array([ctrl.kp * y + ctrl.ki * self.integral[k] + ctrl.kd * delayed])
        return self.trigger(u)

def simulate_pid(plant, ctrl, x0, T, resolution=None):
    '''
    Simulate the sampled-data PID controller, event-triggered with threshold
    ``ctrl.sigma``

    Parameters
    ----------
    plant : PidPlant
    ctrl : SampledPidController
    x0 : ArrayLike[float]
        ``(y(0), y'(0))``.
    T : float
    resolution : int or None

    Returns
    -------
    trace : SimTrace
        States ``(y, y', x_3)`` with ``x_3(t_k) = h Σ_{j<k} y(t_j)``, linear
        in between samples.
    log : EventLog
    '''
    _check_horizon(T, ctrl.h)
    x0 = _check_x0(x0, 2)
    A, B, _ = plant.state_space()
    control = _PidControl(ctrl)
    t, x, u, dense = _simulate(A, B, x0, ctrl.h, sample_count(T, ctrl.h), control, resolution)
    integral = np.array(control.integral)
    x = np.column_stack((x, integral))
    if dense is not None:
        ramp = np.linspace(0, ctrl.h, dense.shape[1])
        x3 = integral[:, None] + ramp[None, :] * x[:, 0, None]
        dense = np.concatenate((dense, x3[:, :, None]), axis=2)
    log = control.trigger.log()
    metadata = {'h': ctrl.h, 'controller': ctrl.to_dict(), 'sigma': ctrl.sigma}
    return SimTrace(t, x, u, dense, metadata), log

def estimate_decay_rate(trace, tail_fraction=0.5):
    '''
    Estimate the exponential decay rate of a trace

    Fits ``log‖x(t_k)‖`` linearly over the last tail_fraction of the samples.

    Returns
    -------
    float
        Negated slope; ``inf`` if the tail reaches numeric zero.
    '''
    if not 0 < tail_fraction <= 1:
        raise ValueError(f'tail_fraction must be in (0, 1], got {tail_fraction}')
    norms = np.linalg.norm(trace.x, axis=1)
    start = min(int(len(norms) * (1 - tail_fraction)), len(norms) - 2)
    t, norms = trace.t[start:], norms[start:]
    if (norms <= np.finfo(float).tiny).any():
        logging.info('Trace reached numeric zero, decay rate is infinite')
        return math.inf
    slope = np.polyfit(t, np.log(norms), 1)[0]
    return float(-slope)

def _window_integrals(trace, integrand, windows, start, weight, step):
    '''
    ``∫_{t_k - window}^{t_k} weight(t_k - s, window) integrand(s) ds`` for
    every ``k >= start`` and window, by the trapezoid rule on every step-th
    dense grid point

    Parameters
    ----------
    integrand : ~numpy.ndarray
        Values on the dense grid for each window, shape
        ``(windows, samples, resolution + 1)``.
    windows : Sequence[int]
        Window lengths in sampling intervals.
    '''
    h = trace.h
    grid = np.linspace(0, h, trace.resolution + 1)[::step]
    values = np.zeros(trace.samples - start)
    for i, window in enumerate(windows):
        offsets = h * np.arange(window, 0, -1)[:, None] - grid[None, :]  # t_k - s
        weights = weight(offsets, window * h)
        for k in range(start, trace.samples):
            segment = integrand[i, k-window:k, ::step]
            values[k - start] += scipy.integrate.trapezoid(weights * segment, dx=h * step / trace.resolution, axis=1).sum()
    return values

def _quadratic(values, matrix):
    return np.einsum('...i,ij,...j->...', values, matrix, values)

def _lti_functional(trace, certificate, plant, ctrl, alpha, start, step):
    r = ctrl.r
    dense = trace.dense
    CA = plant.C @ plant.A
    CA_r1 = stacked_output_map(plant, r)[-plant.l:]
    derivative = dense @ CA.T
    # y^(r) = CA^(r-1)(Ax + Bû) on each interval
    top = dense @ (CA_r1 @ plant.A).T + (trace.u @ (CA_r1 @ plant.B).T)[:, None, :]
    gains = ctrl.gains[1:]
    delta = np.array([
        _quadratic(derivative @ gain.T, certificate[f'W{i}'])
        for i, gain in enumerate(gains, 1)
    ])
    kappa = np.array([
        _quadratic(top @ gain.T, certificate[f'R{i}'])
        for i, gain in enumerate(gains, 1)
    ])
    h = ctrl.h
    V_delta = h**2 * math.exp(2 * alpha * h) * _window_integrals(
        trace, delta, ctrl.q, start, lambda lag, _: np.exp(-2 * alpha * lag), step,
    )
    V_kappa = _window_integrals(
        trace, kappa, ctrl.q, start,
        lambda lag, window: np.exp(-2 * alpha * lag) * (window - lag)**r, step,
    )
    V0 = _quadratic(trace.x[start:], certificate['P'])
    return {'V0': V0, 'V_delta0': np.zeros_like(V0), 'V_delta': V_delta, 'V_kappa': V_kappa}

def _pid_functional(trace, certificate, plant, ctrl, alpha, start, step):
    dense = trace.dense
    derivative = dense[:, :, 1]
    second = -plant.a1 * dense[:, :, 1] - plant.a2 * dense[:, :, 0] + plant.b * trace.u[:, 0, None]
    h = ctrl.h
    gain = ctrl.kd**2
    V_delta = certificate['W'] * gain * h**2 * math.exp(2 * alpha * h) * _window_integrals(
        trace, derivative[None]**2, [ctrl.q], start, lambda lag, _: np.exp(-2 * alpha * lag), step,
    )
    V_kappa = certificate['R'] * gain * _window_integrals(
        trace, second[None]**2, [ctrl.q], start,
        lambda lag, window: np.exp(-2 * alpha * lag) * (window - lag)**2, step,
    )
    V0 = _quadratic(trace.x[start:], certificate['P'])
    return {'V0': V0, 'V_v': np.zeros_like(V0), 'V_delta': V_delta, 'V_kappa': V_kappa}

def evaluate_lyapunov(trace, certificate, plant, ctrl, alpha):
    '''
    Evaluate the Lyapunov-Krasovskii functional of a certificate along a trace

    The functional is evaluated at the sampling instants ``t_k`` from the
    first k whose history window ``[t_k - max(q) h, t_k]`` lies within the
    trace. At ``t_k`` the sampling error terms vanish, leaving ``V_0``, the
    derivative term ``V_δ`` and the Taylor remainder term ``V_κ``.

    Parameters
    ----------
    trace : SimTrace
        With a dense grid of at least 50 points per interval.
    certificate : Certificate
        Of Φ or Φ_e (LTI plants) or Ψ (PID plants).
    plant : LtiPlant or PidPlant
    ctrl : SampledController or SampledPidController
    alpha : float
        Decay rate the certificate was computed for.

    Returns
    -------
    LyapunovDiagnostic
    '''
    resolution = trace.resolution
    if resolution is None or resolution < _MIN_RESOLUTION:
        raise UserError(join_lines(
            f'''
            Lyapunov evaluation needs a dense grid with at least
            {_MIN_RESOLUTION} points per sampling interval, got {resolution}
            '''
        ))
    pid = isinstance(plant, PidPlant)
    functional = _pid_functional if pid else _lti_functional
    start = ctrl.q if pid else max(ctrl.q)
    if start >= trace.samples:
        raise UserError(f'Trace of {trace.samples} samples is shorter than the delay {start}')

    components = functional(trace, certificate, plant, ctrl, alpha, start, 1)
    V = sum(components.values())
    coarse = False
    if resolution % 2 == 0:
        halved = sum(functional(trace, certificate, plant, ctrl, alpha, start, 2).values())
        change = np.abs(halved - V)
        coarse = bool((change > 0.01 * np.abs(V)).any())
        if coarse:
            logging.warning(join_lines(
                f'''
                Quadrature grid too coarse: halving the resolution of {resolution}
                changes V by up to {(change / np.abs(V)).max():.3g} (relative)
                '''
            ))
    frame = pd.DataFrame(components, index=pd.RangeIndex(start, trace.samples, name='k'))
    frame.insert(0, 't', trace.t[start:])
    frame['V'] = V
    frame['weighted'] = np.exp(2 * alpha * frame['t']) * V
    return LyapunovDiagnostic(frame, resolution, start, coarse)

def random_initial_conditions(n, count, seed):
    '''
    Draw initial states uniformly from ``‖x0‖_∞ <= 1``

    Returns
    -------
    ~numpy.ndarray
        count×n array.
    '''
    rng = np.random.default_rng(seed)
    return rng.uniform(-1, 1, size=(count, n))

def simulate_batch(run, initial_conditions, workers=None):
    '''
    Run a simulation for each initial condition, concurrently

    Parameters
    ----------
    run : Callable[[~numpy.ndarray], Any]
        E.g. ``lambda x0: simulate_pid(plant, ctrl, x0, T)``.
    initial_conditions : ArrayLike[float]
        One initial state per row.

    Returns
    -------
    list
        Results in the order of initial_conditions.
    '''
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(run, np.asarray(initial_conditions, dtype=float)))

def transmission_statistics(logs, T, h, h_reference):
    '''
    Summarize the network workload of a batch of event-triggered runs

    Parameters
    ----------
    logs : Sequence[EventLog]
    T : float
    h : float
        Sampling period of the runs.
    h_reference : float
        Sampling period of the periodic sampled-data controller to compare
        against.

    Returns
    -------
    dict
        Mean transmissions, sample counts and reductions of the
        controller-to-actuator and of the total (both networks) workload.
    '''
    if not logs:
        raise UserError('Need at least 1 event log')
    counts = np.array([log.count for log in logs])
    sensor = sample_count(T, h)
    reference = sample_count(T, h_reference)
    mean = float(counts.mean())
    statistics = {
        'runs': len(logs),
        'mean_transmissions': mean,
        'min_transmissions': int(counts.min()),
        'max_transmissions': int(counts.max()),
        'sensor_to_controller': sensor,
        'reference': reference,
        'actuator_reduction': 1 - mean / reference,
        'total_reduction': 1 - (sensor + mean) / (2 * reference),
    }
    logging.info(join_lines(
        f'''
        {len(logs)} runs sent {mean:.1f} control updates on average against
        {reference} for the sampled-data controller
        ({statistics["actuator_reduction"]:.1%} fewer)
        '''
    ))
    return statistics
