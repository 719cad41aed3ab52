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
Delayed sampled-data implementations of ideal controllers
'''

import logging
import math

import attr
import humanize
import numpy as np
import scipy.linalg

from delayctl._util import UserError, join_lines, as_matrix, require_finite


# cond(M) above which M^-1, and thus the gains, are untrustworthy
_MAX_CONDITION = 1e12

# Guards floor() against h**p landing just below an integer, e.g. 0.01**-0.5
_FLOOR_SLACK = 1e-12


def _check_delays(q):
    previous = 0
    for i, q_i in enumerate(q, 1):
        if int(q_i) != q_i:
            raise UserError(f'Delays must be integers, the {humanize.ordinal(i)} is {q_i}')
        if q_i <= previous:
            raise UserError(join_lines(
                f'''
                Delays must be positive and strictly increasing (M is singular
                otherwise), got q={tuple(q)}
                '''
            ))
        previous = q_i

@attr.s(slots=True, frozen=True, repr=False)
class SampledController:

    '''
    Delayed sampled-data controller
    ``u(t) = K_0 y(t_k) + Σ_i K_i y(t_k - q_i h)`` on ``[t_k, t_{k+1})``.

    Parameters
    ----------
    h : float
        Sampling period.
    q : Sequence[int]
        Discrete delays ``0 < q_1 < ... < q_{r-1}``, in samples.
    gains : Sequence[ArrayLike[float]]
        K_0, ..., K_{r-1}, each m×l.
    ill_conditioned : bool
        Whether M was too ill-conditioned to trust the gains.
    '''

    h = attr.ib(converter=float)
    q = attr.ib(converter=lambda q: tuple(int(q_i) if float(q_i).is_integer() else q_i for q_i in q))
    gains = attr.ib(converter=lambda gains: tuple(map(as_matrix, gains)))
    ill_conditioned = attr.ib(default=False)

    @h.validator
    def _validate_h(self, _, h):
        if not (h > 0 and math.isfinite(h)):
            raise UserError(f'Sampling period h must be positive, got {h}')

    @q.validator
    def _validate_q(self, _, q):
        _check_delays(q)

    @gains.validator
    def _validate_gains(self, _, gains):
        if len(gains) != len(self.q) + 1:
            raise ValueError(join_lines(
                f'''
                Need 1 gain more than delays, got {len(gains)} gains and
                {len(self.q)} delays
                '''
            ))
        for i, gain in enumerate(gains, 1):
            require_finite(f'{humanize.ordinal(i)} gain', gain)
            if gain.shape != gains[0].shape:
                raise ValueError(f'The {humanize.ordinal(i)} gain has an inconsistent shape {gain.shape}')

    def __repr__(self):
        return f'SampledController(h={self.h!r}, q={self.q!r})'

    @property
    def r(self):
        return len(self.gains)

    @property
    def delays(self):
        'Delays including the undelayed ``q_0 = 0``'
        return (0,) + self.q

    def stacked(self):
        '[K_0, K_1, ..., K_{r-1}], m×rl'
        return np.hstack(self.gains)

    def to_dict(self):
        return {
            'h': self.h,
            'q': list(self.q),
            'gains': [gain.tolist() for gain in self.gains],
            'ill_conditioned': bool(self.ill_conditioned),
        }

    @classmethod
    def from_dict(cls, controller):
        return cls(
            h=controller['h'], q=controller['q'], gains=controller['gains'],
            ill_conditioned=controller.get('ill_conditioned', False),
        )

@attr.s(slots=True, frozen=True)
class SampledPidController:

    '''
    Sampled-data PID controller
    ``u(t) = k_p y(t_k) + k_i h Σ_{j<k} y(t_j) + k_d y(t_{k-q})`` with event
    triggering threshold ``sigma`` (0 disables triggering).
    '''

    h = attr.ib(converter=float)
    q = attr.ib(converter=int)
    kp = attr.ib(converter=float)
    ki = attr.ib(converter=float)
    kd = attr.ib(converter=float)
    sigma = attr.ib(default=0.0, converter=float)

    @h.validator
    def _validate_h(self, _, h):
        if not (h > 0 and math.isfinite(h)):
            raise UserError(f'Sampling period h must be positive, got {h}')

    @q.validator
    def _validate_q(self, _, q):
        if q < 1:
            raise UserError(f'Delay q must be at least 1, got {q}')

    @sigma.validator
    def _validate_sigma(self, _, sigma):
        if not 0 <= sigma < 1:
            raise UserError(f'Event threshold sigma must be in [0, 1), got {sigma}')

    def with_sigma(self, sigma):
        return attr.evolve(self, sigma=sigma)

    def to_dict(self):
        return attr.asdict(self)

    @classmethod
    def from_dict(cls, controller):
        return cls(**controller)

def build_M(h, q, r, l):
    '''
    Build the Vandermonde-type matrix of Taylor coefficients

    Block (i, j) is ``((-q_i h)^j / j!) I_l`` with ``q_0 = 0``.

    Parameters
    ----------
    h : float
    q : Sequence[int]
        r-1 delays.
    r : int
    l : int
        Output dimension.

    Returns
    -------
    ~numpy.ndarray
        rl×rl matrix.
    '''
    return np.kron(_vandermonde(h, q, r), np.eye(l))

def _vandermonde(h, q, r):
    if not h > 0:
        raise UserError(f'Sampling period h must be positive, got {h}')
    if len(q) != r - 1:
        raise UserError(f'Need r-1={r-1} delays, got {len(q)}: {tuple(q)}')
    _check_delays(q)
    shifts = -h * np.array((0,) + tuple(q), dtype=float)
    return np.array([
        [shift**j / math.factorial(j) for j in range(r)]
        for shift in shifts
    ])

def map_gains(ideal, h, q):
    '''
    Map the ideal gains to gains of the delayed sampled-data controller

    Solves ``[K_0, ..., K_{r-1}] M = [K̄_0, ..., K̄_{r-1}]`` so that the
    closed loop matrix ``D`` equals the ideal ``D̄``.

    Parameters
    ----------
    ideal : DerivativeController
    h : float
    q : Sequence[int]

    Returns
    -------
    SampledController
    '''
    r = ideal.r
    V = _vandermonde(h, q, r)

    # M = V ⊗ I_l, so M^-1 = V^-1 ⊗ I_l and K_j = Σ_i K̄_i (V^-1)_ij
    lu = scipy.linalg.lu_factor(V)
    V_inv = scipy.linalg.lu_solve(lu, np.eye(r))
    gains = [
        sum(V_inv[i, j] * ideal.gains[i] for i in range(r))
        for j in range(r)
    ]

    condition = np.linalg.cond(V)
    ill_conditioned = condition > _MAX_CONDITION
    if ill_conditioned:
        logging.warning(join_lines(
            f'''
            M is ill-conditioned (cond={condition:.3g}) for h={h}, q={tuple(q)};
            the mapped gains may be inaccurate
            '''
        ))
    return SampledController(h=h, q=q, gains=gains, ill_conditioned=ill_conditioned)

def choose_delays(h, r):
    '''
    Get the delays ``q_i = i ⌊h^(1/r - 1)⌋`` that make the sampled-data
    controller feasible for small enough h

    Returns
    -------
    tuple of int
        ``(q_1, ..., q_{r-1})``
    '''
    if not h > 0:
        raise UserError(f'Sampling period h must be positive, got {h}')
    if r < 2:
        raise UserError(f'Need relative degree r >= 2 for delays, got {r}')
    step = math.floor(h ** (1 / r - 1) * (1 + _FLOOR_SLACK))
    if step < 1:
        raise UserError(f'h too large for delay rule: ⌊h^(1/r-1)⌋ = 0 for h={h}, r={r}')
    return tuple(i * step for i in range(1, r))

def rule_based_controller(ideal, h):
    'map_gains with the delays of choose_delays'
    return map_gains(ideal, h, choose_delays(h, ideal.r))

def map_pid_gains(ideal, h, q, sigma=0.0):
    '''
    Map ideal PID gains to the sampled-data PID controller

    ``k_d = -k̄_d/(qh)``, ``k_i = k̄_i``, ``k_p = k̄_p - k_d``.

    Returns
    -------
    SampledPidController
    '''
    if not h > 0:
        raise UserError(f'Sampling period h must be positive, got {h}')
    if q < 1:
        raise UserError(f'Delay q must be at least 1, got {q}')
    kd = -ideal.kd_bar / (q * h)
    return SampledPidController(
        h=h, q=q, kp=ideal.kp_bar - kd, ki=ideal.ki_bar, kd=kd, sigma=sigma,
    )

def choose_pid_delay(h):
    'Get the delay ``q = ⌊h^(-1/2)⌋``'
    if not 0 < h < 1:
        raise UserError(f'Delay rule needs h in (0, 1), got {h}')
    q = math.floor(h ** -0.5 * (1 + _FLOOR_SLACK))
    if q < 1:
        raise UserError(f'h too large for delay rule, got h={h}')
    return q

def rule_based_pid_controller(ideal, h, sigma=0.0):
    'map_pid_gains with the delay of choose_pid_delay'
    return map_pid_gains(ideal, h, choose_pid_delay(h), sigma=sigma)
