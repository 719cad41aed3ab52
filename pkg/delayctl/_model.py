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
Plants, ideal (derivative-dependent) controllers and their structural checks
'''

from numbers import Number
import logging
import math

import attr
import humanize
import numpy as np
import scipy.linalg

from delayctl._util import (
    UserError, ConfigError, join_lines, as_matrix, require_finite
)


def _finite_matrix(instance, attribute, value):
    require_finite(attribute.name, value)

@attr.s(slots=True, frozen=True, repr=False)
class LtiPlant:

    '''
    Continuous-time plant ``x' = Ax + Bu, y = Cx``.

    Parameters
    ----------
    A : ArrayLike[float]
        n×n state matrix.
    B : ArrayLike[float]
        n×m input matrix.
    C : ArrayLike[float]
        l×n output matrix.
    '''

    A = attr.ib(converter=as_matrix, validator=_finite_matrix)
    B = attr.ib(converter=as_matrix, validator=_finite_matrix)
    C = attr.ib(converter=as_matrix, validator=_finite_matrix)

    def __attrs_post_init__(self):
        n = self.A.shape[0]
        if self.A.shape != (n, n):
            raise ValueError(f'A must be square, got shape {self.A.shape}')
        if self.B.shape[0] != n:
            raise ValueError(
                f'B must have {n} rows (like A), got shape {self.B.shape}'
            )
        if self.C.shape[1] != n:
            raise ValueError(
                f'C must have {n} columns (like A), got shape {self.C.shape}'
            )

    def __repr__(self):
        return f'LtiPlant(n={self.n}, m={self.m}, l={self.l})'

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.B.shape[1]

    @property
    def l(self):
        return self.C.shape[0]

    @classmethod
    def from_dict(cls, plant, pointer='/plant'):
        for name in 'ABC':
            if name not in plant:
                raise ConfigError(f'{pointer}/{name}', 'missing plant matrix')
            _check_nested_numbers(plant[name], f'{pointer}/{name}')
        try:
            return cls(A=plant['A'], B=plant['B'], C=plant['C'])
        except ValueError as ex:
            raise ConfigError(pointer, str(ex)) from ex

    def to_dict(self):
        return {
            'type': 'lti', 'A': self.A.tolist(), 'B': self.B.tolist(),
            'C': self.C.tolist(),
        }

@attr.s(slots=True, frozen=True)
class PidPlant:

    '''
    Scalar second order plant ``y'' + a1 y' + a2 y = b u``.
    '''

    a1 = attr.ib(converter=float)
    a2 = attr.ib(converter=float)
    b = attr.ib(converter=float)

    @a1.validator
    @a2.validator
    def _validate_coefficient(self, attribute, value):
        if not math.isfinite(value):
            raise ValueError(f'{attribute.name} must be finite, got {value}')

    @b.validator
    def _validate_b(self, _, b):
        if not math.isfinite(b) or b == 0:
            raise ValueError(f'b must be finite and nonzero, got {b}')

    def state_space(self):
        '''
        2-state realization with ``x = (y, y')``

        Returns
        -------
        A, B, C : ~numpy.ndarray
        '''
        A = np.array([[0, 1], [-self.a2, -self.a1]])
        B = np.array([[0], [self.b]])
        C = np.array([[1.0, 0]])
        return A, B, C

    def closed_loop(self, ideal):
        '''
        Closed loop under the ideal PID controller, state ``(y, y', ∫y)``
        '''
        return np.array([
            [0, 1, 0],
            [-self.a2 + self.b * ideal.kp_bar, -self.a1 + self.b * ideal.kd_bar, self.b * ideal.ki_bar],
            [1, 0, 0],
        ])

    @classmethod
    def from_dict(cls, plant, pointer='/plant'):
        values = _scalars(plant, ('a1', 'a2', 'b'), pointer)
        try:
            return cls(**values)
        except ValueError as ex:
            raise ConfigError(pointer + '/b', str(ex)) from ex

    def to_dict(self):
        return {'type': 'pid', 'a1': self.a1, 'a2': self.a2, 'b': self.b}

@attr.s(slots=True, frozen=True, repr=False)
class DerivativeController:

    '''
    Ideal controller ``u = K̄_0 y + K̄_1 y' + ... + K̄_{r-1} y^(r-1)``.

    Parameters
    ----------
    gains : Sequence[ArrayLike[float]]
        K̄_0, ..., K̄_{r-1}, each m×l. Scalars are taken as 1×1 matrices.
    '''

    gains = attr.ib(converter=lambda gains: tuple(map(as_matrix, gains)))

    @gains.validator
    def _validate_gains(self, _, gains):
        if not gains:
            raise ValueError('Need at least 1 gain')
        shape = gains[0].shape
        for i, gain in enumerate(gains, 1):
            require_finite(f'{humanize.ordinal(i)} gain', gain)
            if gain.shape != shape:
                raise ValueError(
                    f'The {humanize.ordinal(i)} gain has shape {gain.shape}, '
                    f'expected {shape} like the first gain'
                )

    def __repr__(self):
        return f'DerivativeController(r={self.r})'

    @property
    def r(self):
        return len(self.gains)

    def stacked(self):
        '[K̄_0, ..., K̄_{r-1}], m×rl'
        return np.hstack(self.gains)

    def closed_loop(self, plant):
        'D̄ = A + B [K̄_0, ..., K̄_{r-1}] C̄'
        return plant.A + plant.B @ self.stacked() @ stacked_output_map(plant, self.r)

    @classmethod
    def from_dict(cls, controller, pointer='/controller'):
        if 'gains' not in controller:
            raise ConfigError(pointer + '/gains', 'missing ideal gains')
        gains = controller['gains']
        if not isinstance(gains, list) or not gains:
            raise ConfigError(pointer + '/gains', 'must be a non-empty list of gains')
        _check_nested_numbers(gains, pointer + '/gains')
        try:
            return cls(gains)
        except ValueError as ex:
            raise ConfigError(pointer + '/gains', str(ex)) from ex

    def to_dict(self):
        return {'gains': [gain.tolist() for gain in self.gains]}

@attr.s(slots=True, frozen=True)
class PidController:

    'Ideal PID controller ``u = k̄_p y + k̄_i ∫y + k̄_d y\'``'

    kp_bar = attr.ib(converter=float)
    ki_bar = attr.ib(converter=float)
    kd_bar = attr.ib(converter=float)

    @kp_bar.validator
    @ki_bar.validator
    @kd_bar.validator
    def _validate_gain(self, attribute, value):
        if not math.isfinite(value):
            raise ValueError(f'{attribute.name} must be finite, got {value}')

    @classmethod
    def from_dict(cls, controller, pointer='/controller'):
        values = _scalars(controller, ('kp', 'ki', 'kd'), pointer)
        return cls(values['kp'], values['ki'], values['kd'])

    def to_dict(self):
        return {'kp': self.kp_bar, 'ki': self.ki_bar, 'kd': self.kd_bar}

def _scalars(data, names, pointer):
    values = {}
    for name in names:
        if name not in data:
            raise ConfigError(f'{pointer}/{name}', 'missing value')
        value = data[name]
        if isinstance(value, bool) or not isinstance(value, Number) or not math.isfinite(value):
            raise ConfigError(f'{pointer}/{name}', f'must be a finite number, got {value!r}')
        values[name] = value
    return values

def _check_nested_numbers(value, pointer):
    if isinstance(value, list):
        for i, item in enumerate(value):
            _check_nested_numbers(item, f'{pointer}/{i}')
    elif isinstance(value, bool) or not isinstance(value, Number) or not math.isfinite(value):
        raise ConfigError(pointer, f'must be a finite number, got {value!r}')

def relative_degree(plant, r_max):
    '''
    Get the relative degree of a plant

    Parameters
    ----------
    plant : LtiPlant
    r_max : int
        Largest relative degree to consider.

    Returns
    -------
    int
        Smallest r with ``CA^iB = 0`` for ``i < r-1`` and ``CA^(r-1)B != 0``.

    Raises
    ------
    UserError
        If all Markov parameters up to ``r_max`` vanish, or if one of them is
        too close to the zero tolerance to tell.
    '''
    if r_max < 1:
        raise ValueError(f'r_max must be at least 1, got {r_max}')
    norm_A = np.linalg.norm(plant.A, 2)
    norm_B = np.linalg.norm(plant.B, 2)
    norm_C = np.linalg.norm(plant.C, 2)
    CA = plant.C
    for i in range(r_max):
        markov = np.linalg.norm(CA @ plant.B, 2)
        tolerance = 1e-9 * (1 + norm_C * norm_A**i * norm_B)
        if tolerance < markov < 10 * tolerance:
            raise UserError(join_lines(
                f'''
                ill-conditioned relative degree: ‖CA^{i}B‖ = {markov:.3g} is
                within a factor 10 of the zero tolerance {tolerance:.3g}
                '''
            ))
        if markov >= 10 * tolerance:
            return i + 1
        CA = CA @ plant.A
    raise UserError(f'Plant has no relative degree up to r_max={r_max}, all CA^iB vanish')

def stacked_output_map(plant, r):
    '''
    Get ``C̄ = [C; CA; ...; CA^(r-1)]``, the map from state to output derivatives

    Returns
    -------
    ~numpy.ndarray
        rl×n matrix.
    '''
    if r < 1:
        raise ValueError(f'r must be at least 1, got {r}')
    rows = [plant.C]
    for _ in range(r - 1):
        rows.append(rows[-1] @ plant.A)
    return np.vstack(rows)

def decay_rate(closed_loop):
    '''
    Get the decay rate of ``x' = D̄x``, the negated spectral abscissa of D̄

    Positive iff D̄ is Hurwitz.
    '''
    closed_loop = np.asarray(closed_loop, dtype=float)
    if closed_loop.ndim != 2 or closed_loop.shape[0] != closed_loop.shape[1]:
        raise ValueError(f'closed_loop must be square, got shape {closed_loop.shape}')
    require_finite('closed_loop', closed_loop)
    rate = -scipy.linalg.eigvals(closed_loop).real.max()
    logging.debug(f'Decay rate of closed loop: {rate:.6g}')
    return float(rate)
