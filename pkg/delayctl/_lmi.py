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
Affine symmetric matrix maps of the stability conditions

Each condition is built as a plain function of numeric variable values which
assembles the symmetric block matrix; `AffineLmi.from_function` then extracts
the constant term and one coefficient matrix per scalar unknown by evaluating
it at zero and at each basis element.
'''

from textwrap import dedent
import logging
import math

import attr
import numpy as np

from delayctl._model import relative_degree, stacked_output_map
from delayctl._synthesis import build_M
from delayctl._util import UserError, join_lines, as_matrix


_KINDS = ('definite', 'nonnegative')


@attr.s(slots=True, frozen=True)
class Variable:

    '''
    Decision variable of an LMI

    Parameters
    ----------
    name : str
    size : int
        Matrix dimension; 1 for scalars.
    kind : str
        'definite' for a symmetric positive definite ``size×size`` matrix or
        'nonnegative' for a nonnegative scalar.
    '''

    name = attr.ib()
    size = attr.ib(converter=int)
    kind = attr.ib(default='definite')

    @kind.validator
    def _validate_kind(self, _, kind):
        if kind not in _KINDS:
            raise ValueError(f'kind must be one of {_KINDS}, got {kind!r}')
        if kind == 'nonnegative' and self.size != 1:
            raise ValueError(f'Nonnegative variable {self.name} must be scalar')

    @property
    def unknowns(self):
        return self.size * (self.size + 1) // 2

    def _indices(self):
        return [(i, j) for i in range(self.size) for j in range(i, self.size)]

    def basis(self):
        'Symmetric basis matrices, one per unknown'
        basis = []
        for i, j in self._indices():
            E = np.zeros((self.size, self.size))
            E[i, j] = E[j, i] = 1
            basis.append(E)
        return basis

    def unpack(self, vector):
        if self.kind == 'nonnegative':
            return float(vector[0])
        X = np.zeros((self.size, self.size))
        for value, (i, j) in zip(vector, self._indices()):
            X[i, j] = X[j, i] = value
        return X

    def pack(self, value):
        if self.kind == 'nonnegative':
            return np.array([float(value)])
        value = np.asarray(value, dtype=float).reshape(self.size, self.size)
        return np.array([value[i, j] for i, j in self._indices()])

@attr.s(slots=True, frozen=True)
class DecisionLayout:

    'Ordered decision variables of an LMI'

    variables = attr.ib(converter=tuple)

    @variables.validator
    def _validate_variables(self, _, variables):
        names = [variable.name for variable in variables]
        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise ValueError(f'Duplicate variable names: {", ".join(duplicates)}')

    @property
    def unknowns(self):
        return sum(variable.unknowns for variable in self.variables)

    @property
    def names(self):
        return tuple(variable.name for variable in self.variables)

    def __getitem__(self, name):
        for variable in self.variables:
            if variable.name == name:
                return variable
        raise KeyError(name)

    def slices(self):
        'Map of variable name to its slice of the unknowns vector'
        slices = {}
        offset = 0
        for variable in self.variables:
            slices[variable.name] = slice(offset, offset + variable.unknowns)
            offset += variable.unknowns
        return slices

    def unpack(self, vector):
        slices = self.slices()
        return {
            variable.name: variable.unpack(vector[slices[variable.name]])
            for variable in self.variables
        }

    def pack(self, values):
        missing = set(self.names) - set(values)
        if missing:
            raise UserError(f'Missing values for variables: {", ".join(sorted(missing))}')
        return np.concatenate([
            variable.pack(values[variable.name]) for variable in self.variables
        ])

    def zero(self):
        return self.unpack(np.zeros(self.unknowns))

    def to_dict(self):
        return [attr.asdict(variable) for variable in self.variables]

    @classmethod
    def from_dict(cls, variables):
        return cls([Variable(**variable) for variable in variables])

def _readonly(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array

@attr.s(slots=True, frozen=True, repr=False)
class AffineLmi:

    '''
    Affine symmetric matrix map ``F(z) = F_0 + Σ_j z_j F_j``

    The condition it represents is ``F(z) ≤ 0`` (negative semidefinite).

    Parameters
    ----------
    name : str
        E.g. 'phi', 'phi_e', 'psi'.
    blocks : Sequence[Tuple[str, int]]
        Name and dimension of each block row/column, in order.
    layout : DecisionLayout
    constant : ArrayLike[float]
        F_0.
    coefficients : ArrayLike[float]
        F_1, ..., F_k stacked along the first axis, one per scalar unknown of
        the layout.
    '''

    name = attr.ib()
    blocks = attr.ib(converter=lambda blocks: tuple((str(name), int(dim)) for name, dim in blocks))
    layout = attr.ib()
    constant = attr.ib(converter=_readonly)
    coefficients = attr.ib(converter=_readonly)

    def __attrs_post_init__(self):
        dim = sum(dim for _, dim in self.blocks)
        if self.constant.shape != (dim, dim):
            raise ValueError(join_lines(
                f'''
                Block dimensions sum to {dim}, but the constant term has shape
                {self.constant.shape}
                '''
            ))
        expected = (self.layout.unknowns, dim, dim)
        if self.coefficients.shape != expected:
            raise ValueError(f'Expected coefficients of shape {expected}, got {self.coefficients.shape}')
        asymmetry = max(
            np.abs(self.constant - self.constant.T).max(initial=0),
            np.abs(self.coefficients - self.coefficients.transpose(0, 2, 1)).max(initial=0),
        )
        if asymmetry > 1e-12 * (1 + np.abs(self.coefficients).max(initial=0)):
            raise ValueError(f'LMI {self.name} is not symmetric (asymmetry {asymmetry:.3g})')

    def __repr__(self):
        return f'AffineLmi({self.name!r}, dim={self.dim}, unknowns={self.layout.unknowns})'

    @classmethod
    def from_function(cls, name, blocks, layout, function):
        '''
        Extract the affine map of a function of the variable values

        Parameters
        ----------
        function : Callable[[Dict[str, Any]], ~numpy.ndarray]
            Affine function of the variable values (matrices for definite
            variables, floats for scalars) returning the symmetric matrix.
        '''
        constant = function(layout.zero())
        coefficients = []
        for j in range(layout.unknowns):
            unit = np.zeros(layout.unknowns)
            unit[j] = 1
            coefficients.append(function(layout.unpack(unit)) - constant)
        dim = sum(dim for _, dim in blocks)
        coefficients = np.array(coefficients).reshape(layout.unknowns, dim, dim)
        lmi = cls(name, blocks, layout, constant, coefficients)
        logging.info(join_lines(
            f'''
            Built LMI {name}: {lmi.dim}×{lmi.dim}, {layout.unknowns} unknowns,
            coefficient dynamic range {lmi.dynamic_range():.3g}
            '''
        ))
        return lmi

    @property
    def dim(self):
        return self.constant.shape[0]

    def block_slices(self):
        slices = {}
        offset = 0
        for name, dim in self.blocks:
            slices[name] = slice(offset, offset + dim)
            offset += dim
        return slices

    def evaluate_vector(self, vector):
        vector = np.asarray(vector, dtype=float)
        if vector.shape != (self.layout.unknowns,):
            raise ValueError(f'Expected {self.layout.unknowns} unknowns, got shape {vector.shape}')
        return self.constant + np.tensordot(vector, self.coefficients, axes=1)

    def evaluate(self, values):
        '''
        Evaluate at variable values

        Parameters
        ----------
        values : Dict[str, Any]
            Variable name to value (matrix or float).
        '''
        return self.evaluate_vector(self.layout.pack(values))

    def scale(self, values):
        'Bound on the magnitude of the evaluated matrix, ``1 + ‖F_0‖ + Σ|z_j| ‖F_j‖``'
        vector = self.layout.pack(values)
        norms = np.linalg.norm(self.coefficients, axis=(1, 2))
        return 1 + np.linalg.norm(self.constant) + np.abs(vector) @ norms

    def prune(self):
        '''
        Drop rows and columns that are zero in every term

        A zero row/column does not change whether the matrix is negative
        semidefinite, but it does keep its largest eigenvalue at 0.
        '''
        used = (self.constant != 0).any(axis=0) | (self.coefficients != 0).any(axis=(0, 1))
        if used.all():
            return self
        blocks = []
        for name, block in self.block_slices().items():
            dim = int(used[block].sum())
            if dim:
                blocks.append((name, dim))
        pruned = AffineLmi(
            self.name, blocks, self.layout,
            self.constant[np.ix_(used, used)],
            self.coefficients[:, used][:, :, used],
        )
        logging.info(f'Pruned {(~used).sum()} zero rows/columns from LMI {self.name}')
        return pruned

    def dynamic_range(self):
        'Ratio of the largest to the smallest nonzero coefficient magnitude'
        magnitudes = np.abs(np.concatenate((self.constant.ravel(), self.coefficients.ravel())))
        magnitudes = magnitudes[magnitudes > 0]
        if not magnitudes.size:
            return 1.0
        return float(magnitudes.max() / magnitudes.min())

    def to_dict(self):
        return {
            'name': self.name,
            'blocks': [list(block) for block in self.blocks],
            'variables': self.layout.to_dict(),
            'constant': self.constant.tolist(),
            'coefficients': self.coefficients.tolist(),
        }

    @classmethod
    def from_dict(cls, lmi):
        layout = DecisionLayout.from_dict(lmi['variables'])
        dim = sum(dim for _, dim in lmi['blocks'])
        coefficients = np.array(lmi['coefficients'], dtype=float).reshape(layout.unknowns, dim, dim)
        return cls(lmi['name'], lmi['blocks'], layout, lmi['constant'], coefficients)

@attr.s(slots=True, frozen=True, repr=False)
class Certificate:

    '''
    Numeric feasibility witness of an LMI

    Parameters
    ----------
    lmi_name : str
    values : Dict[str, Any]
        Variable name to value: matrix for definite variables, float for
        nonnegative scalars.
    margin : float
        Largest eigenvalue of the LMI at the values, as found by the solver.
    diagnostics : dict
        Solver diagnostics.
    '''

    lmi_name = attr.ib()
    values = attr.ib(converter=lambda values: {
        name: float(value) if np.ndim(value) == 0 else as_matrix(value)
        for name, value in values.items()
    })
    margin = attr.ib(default=math.nan, converter=float)
    diagnostics = attr.ib(factory=dict)

    def __repr__(self):
        return f'Certificate({self.lmi_name!r}, margin={self.margin:.3g})'

    def __getitem__(self, name):
        return self.values[name]

    def scaled(self, factor):
        'Certificate with every variable multiplied by factor'
        return attr.evolve(
            self,
            values={name: value * factor for name, value in self.values.items()},
            margin=self.margin * factor,
        )

    def to_dict(self):
        return {
            'lmi': self.lmi_name,
            'values': {
                name: value if isinstance(value, float) else value.tolist()
                for name, value in self.values.items()
            },
            'margin': self.margin,
            'diagnostics': self.diagnostics,
        }

    @classmethod
    def from_dict(cls, certificate):
        return cls(
            certificate['lmi'], certificate['values'],
            certificate.get('margin', math.nan), certificate.get('diagnostics', {}),
        )

def _assemble(blocks, entries):
    '''
    Assemble a symmetric block matrix from its upper triangular blocks

    Parameters
    ----------
    blocks : Sequence[Tuple[str, int]]
    entries : Dict[Tuple[str, str], ArrayLike[float]]
        Upper triangular blocks by (row block name, column block name); missing
        blocks are zero. Scalars are broadcast to 1×1 blocks.
    '''
    dims = dict(blocks)
    names = [name for name, _ in blocks]
    offsets = dict(zip(names, np.cumsum([0] + [dims[name] for name in names])))
    matrix = np.zeros((sum(dims.values()),) * 2)
    for (row, column), value in entries.items():
        if names.index(row) > names.index(column):
            raise ValueError(f'Block ({row}, {column}) is not upper triangular')
        shape = (dims[row], dims[column])
        value = np.broadcast_to(np.asarray(value, dtype=float), shape)
        i, j = offsets[row], offsets[column]
        matrix[i:i+shape[0], j:j+shape[1]] = value
        if row != column:
            matrix[j:j+shape[1], i:i+shape[0]] = value.T
    return matrix

def _check_alpha(alpha):
    if not (alpha > 0 and math.isfinite(alpha)):
        raise UserError(f'Decay rate alpha must be positive, got {alpha}')

def _check_sigma(sigma):
    if not 0 <= sigma < 1:
        raise UserError(f'Event threshold sigma must be in [0, 1), got {sigma}')

class _PhiTerms:

    'Constant matrices shared by the sampled-data and event-triggered LMIs'

    def __init__(self, plant, ctrl, alpha):
        _check_alpha(alpha)
        r = ctrl.r
        if r < 2:
            raise UserError(f'Need relative degree r >= 2, the controller has r={r}')
        try:
            plant_r = relative_degree(plant, r)
        except UserError as ex:
            raise UserError(f'Relative degree of plant must be r={r}: {ex}') from ex
        if plant_r != r:
            raise UserError(join_lines(
                f'''
                Plant has relative degree {plant_r}, but the controller has
                {r} gains
                '''
            ))
        if ctrl.gains[0].shape != (plant.m, plant.l):
            raise UserError(join_lines(
                f'''
                Controller gains must be {plant.m}×{plant.l} (m×l), got
                {ctrl.gains[0].shape}
                '''
            ))

        self.plant = plant
        self.ctrl = ctrl
        self.alpha = alpha
        self.r = r
        h = ctrl.h
        C_bar = stacked_output_map(plant, r)
        M = build_M(h, ctrl.q, r, plant.l)
        CA_r1 = C_bar[-plant.l:]

        self.gain = ctrl.stacked() @ M @ C_bar  # u = gain x + errors
        self.D = plant.A + plant.B @ self.gain
        self.CA = plant.C @ plant.A
        self.E = CA_r1 @ self.D  # y^(r) = E x + F (errors)
        self.F = CA_r1 @ plant.B
        self.weight = h**2 * math.exp(2 * alpha * h)
        self.decays = [math.exp(-2 * alpha * q_i * h) for q_i in ctrl.delays]
        self.horizons = [(q_i * h) ** r for q_i in ctrl.delays]

    def blocks(self):
        m = self.plant.m
        return (
            [('x', self.plant.n)]
            + [(f'K{i}*delta{i}', m) for i in range(self.r)]
            + [(f'K{i}*kappa{i}', m) for i in range(1, self.r)]
            + [('H', self.plant.l)]
        )

    def variables(self):
        m = self.plant.m
        return (
            [Variable('P', self.plant.n)]
            + [Variable(f'W{i}', m) for i in range(self.r)]
            + [Variable(f'R{i}', m) for i in range(1, self.r)]
        )

    def entries(self, values):
        r = self.r
        P = values['P']
        B = self.plant.B
        K = self.ctrl.gains
        H = sum(
            self.horizons[i] * K[i].T @ values[f'R{i}'] @ K[i]
            for i in range(1, r)
        )
        PB = P @ B
        FH = self.F.T @ H
        entries = {
            ('x', 'x'): (
                P @ self.D + self.D.T @ P + 2 * self.alpha * P
                + self.weight * sum(
                    (K[i] @ self.CA).T @ values[f'W{i}'] @ (K[i] @ self.CA)
                    for i in range(r)
                )
            ),
            ('x', 'H'): self.E.T @ H,
            ('H', 'H'): -H,
        }
        for i in range(r):
            delta = f'K{i}*delta{i}'
            entries['x', delta] = PB
            entries[delta, delta] = -math.pi**2 / 4 * self.decays[i] * values[f'W{i}']
            entries[delta, 'H'] = FH
        for i in range(1, r):
            kappa = f'K{i}*kappa{i}'
            entries['x', kappa] = PB
            entries[kappa, kappa] = (
                -math.factorial(r)**2 * self.decays[i] / self.horizons[i] * values[f'R{i}']
            )
            entries[kappa, 'H'] = FH
        return entries, H

def build_phi(plant, ctrl, alpha):
    '''
    Build the LMI certifying the delayed sampled-data controller

    ``Φ ≤ 0`` with ``P, W_0, ..., W_{r-1}, R_1, ..., R_{r-1} > 0`` guarantees
    exponential stability of the closed loop with decay rate alpha.

    Parameters
    ----------
    plant : LtiPlant
    ctrl : SampledController
    alpha : float
        Decay rate, positive.

    Returns
    -------
    AffineLmi
        Blocks ``x, K_0δ_0, ..., K_{r-1}δ_{r-1}, K_1κ_1, ..., K_{r-1}κ_{r-1}, H``.
    '''
    terms = _PhiTerms(plant, ctrl, alpha)
    blocks = terms.blocks()

    def phi(values):
        entries, _ = terms.entries(values)
        return _assemble(blocks, entries)

    return AffineLmi.from_function('phi', blocks, DecisionLayout(terms.variables()), phi)

def build_phi_e(plant, ctrl, alpha, sigma):
    '''
    Build the LMI certifying the event-triggered sampled-data controller

    Extends `build_phi` with the trigger error block ``e_k`` and the block
    compensating ``σ uᵀΩu``; adds the variable ``Omega > 0``.

    Returns
    -------
    AffineLmi
    '''
    _check_sigma(sigma)
    terms = _PhiTerms(plant, ctrl, alpha)
    m = plant.m
    blocks = terms.blocks() + [('e_k', m), ('sigma', m)]
    layout = DecisionLayout(terms.variables() + [Variable('Omega', m)])

    def phi_e(values):
        entries, H = terms.entries(values)
        Omega = values['Omega']
        entries['x', 'e_k'] = values['P'] @ plant.B
        entries['H', 'e_k'] = H @ terms.F
        entries['e_k', 'e_k'] = -Omega
        entries['x', 'sigma'] = sigma * terms.gain.T @ Omega
        for name, _ in terms.blocks()[1:-1]:
            entries[name, 'sigma'] = sigma * Omega
        entries['sigma', 'sigma'] = -sigma * Omega
        return _assemble(blocks, entries)

    return AffineLmi.from_function('phi_e', blocks, layout, phi_e)

_SELECTOR = np.diag([0.0, 1.0, 0.0])

def pid_closed_loop(plant, ctrl):
    '''
    Closed loop of the sampled-data PID controller in the state
    ``x = (y, y', x_3)``

    ``x' = Ax + A_v v + B k_d (κ + δ) + B e_k, y = Cx`` with ``v`` the
    sampling error of x.

    Returns
    -------
    A, A_v, B, C : ~numpy.ndarray
    '''
    a1, a2, b = plant.a1, plant.a2, plant.b
    kp, ki, kd = ctrl.kp, ctrl.ki, ctrl.kd
    qh = ctrl.q * ctrl.h
    A = np.array([
        [0, 1, 0],
        [-a2 + b * (kp + kd), -a1 - qh * b * kd, b * ki],
        [1, 0, 0],
    ])
    A_v = np.array([
        [0, 0, 0],
        [b * kp, 0, b * ki],
        [1, 0, 0],
    ])
    B = np.array([[0], [b], [0]])
    C = np.array([[1.0, 0, 0]])
    return A, A_v, B, C

def build_psi(plant, ctrl, alpha):
    '''
    Build the LMI certifying the event-triggered sampled-data PID controller

    ``Ψ ≤ 0`` with ``P, S > 0`` and ``W, R, ω ≥ 0`` guarantees exponential
    stability with decay rate alpha. The event threshold is ``ctrl.sigma``.

    Parameters
    ----------
    plant : PidPlant
    ctrl : SampledPidController
    alpha : float

    Returns
    -------
    AffineLmi
        Blocks ``x, v/√h, k_dδ, k_dκ, e_k, σ, G``, 13×13.
    '''
    _check_alpha(alpha)
    A, A_v, B, _ = pid_closed_loop(plant, ctrl)
    h, qh, sigma = ctrl.h, ctrl.q * ctrl.h, ctrl.sigma
    kp, ki, kd = ctrl.kp, ctrl.ki, ctrl.kd
    root_h = math.sqrt(h)
    weight = h**2 * math.exp(2 * alpha * h)
    decay = math.exp(-2 * alpha * qh)
    u_x = np.array([[kp + kd], [-qh * kd], [ki]])  # u(t_k) = u_x·x + u_v·v + k_d(κ+δ)
    u_v = np.array([[kp], [0], [ki]])

    blocks = [
        ('x', 3), ('v/sqrt(h)', 3), ('kd*delta', 1), ('kd*kappa', 1),
        ('e_k', 1), ('sigma', 1), ('G', 3),
    ]
    layout = DecisionLayout([
        Variable('P', 3), Variable('S', 3), Variable('W', 1, 'nonnegative'),
        Variable('R', 1, 'nonnegative'), Variable('omega', 1, 'nonnegative'),
    ])

    def psi(values):
        P, S = values['P'], values['S']
        W, R, omega = values['W'], values['R'], values['omega']
        G = weight * S + _SELECTOR * R * kd**2 * qh**2
        PB = P @ B
        BG = B.T @ G
        return _assemble(blocks, {
            ('x', 'x'): P @ A + A.T @ P + 2 * alpha * P + _SELECTOR * W * kd**2 * weight,
            ('x', 'v/sqrt(h)'): P @ A_v * root_h,
            ('x', 'kd*delta'): PB,
            ('x', 'kd*kappa'): PB,
            ('x', 'e_k'): PB,
            ('x', 'sigma'): u_x * omega * sigma,
            ('x', 'G'): A.T @ G,
            ('v/sqrt(h)', 'v/sqrt(h)'): -math.pi**2 / 4 * S * h,
            ('v/sqrt(h)', 'sigma'): u_v * omega * sigma * root_h,
            ('v/sqrt(h)', 'G'): A_v.T @ G * root_h,
            ('kd*delta', 'kd*delta'): -W * math.pi**2 / 4 * decay,
            ('kd*delta', 'sigma'): omega * sigma,
            ('kd*delta', 'G'): BG,
            ('kd*kappa', 'kd*kappa'): -R * 4 / qh**2 * decay,
            ('kd*kappa', 'sigma'): omega * sigma,
            ('kd*kappa', 'G'): BG,
            ('e_k', 'e_k'): -omega,
            ('e_k', 'G'): BG,
            ('sigma', 'sigma'): -omega * sigma,
            ('G', 'G'): -G,
        })

    return AffineLmi.from_function('psi', blocks, layout, psi)

def schur_complement(matrix, keep):
    '''
    Schur complement ``M11 - M12 M22^+ M21`` of the trailing block

    Parameters
    ----------
    matrix : ~numpy.ndarray
        Symmetric matrix.
    keep : int
        Dimension of the leading block M11.
    '''
    M11 = matrix[:keep, :keep]
    M12 = matrix[:keep, keep:]
    M22 = matrix[keep:, keep:]
    return M11 - M12 @ np.linalg.pinv(M22) @ M12.T

def trigger_extension(lmi_e, certificate):
    '''
    Extend a certificate of Φ to one of Φ_e with σ = 0 and ``Ω = ωI``

    With σ = 0 the event-triggered condition only adds the ``e_k`` border;
    a large enough ω makes it negative definite whenever Φ is.

    Parameters
    ----------
    lmi_e : AffineLmi
        Built by `build_phi_e` with ``sigma=0``.
    certificate : Certificate
        Certificate of the matching Φ, with negative margin.

    Returns
    -------
    Certificate
    '''
    m = dict(lmi_e.blocks)['e_k']
    values = dict(certificate.values, Omega=np.zeros((m, m)))
    matrix = lmi_e.evaluate(values)
    slices = lmi_e.block_slices()
    if np.any(matrix[:, slices['sigma']]) or np.any(lmi_e.coefficients[:, :, slices['sigma']]):
        raise ValueError('trigger_extension needs Φ_e built with sigma=0')
    phi_dim = slices['e_k'].start
    phi = matrix[:phi_dim, :phi_dim]
    border = matrix[:phi_dim, slices['e_k']]
    largest = np.linalg.eigvalsh(phi).max()
    if largest >= 0:
        raise UserError(f'Φ certificate is not strictly feasible (λ_max={largest:.3g})')
    omega = 2 * np.linalg.norm(border, 2)**2 / -largest + -largest
    values['Omega'] = omega * np.eye(m)
    logging.info(f'Extended Φ certificate to Φ_e with sigma=0 using omega={omega:.3g}')
    extended = np.linalg.eigvalsh(lmi_e.prune().evaluate(values)).max()
    return Certificate('phi_e', values, extended, {'omega': omega})

def describe(lmi):
    'Human readable summary of the block structure'
    blocks = ', '.join(f'{name} ({dim})' for name, dim in lmi.blocks)
    variables = ', '.join(
        f'{variable.name} ({variable.kind} {variable.size}×{variable.size})'
        for variable in lmi.layout.variables
    )
    return dedent(f'''\
        LMI {lmi.name}: {lmi.dim}×{lmi.dim}, {lmi.layout.unknowns} unknowns
        blocks: {blocks}
        variables: {variables}''')
