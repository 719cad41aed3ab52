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
Feasibility of a single LMI and independent verification of its certificates
'''

import logging

import attr
import cvxopt
import numpy as np

from delayctl._lmi import Certificate
from delayctl._util import UserError, NumericalError, join_lines


_STATUSES = ('feasible', 'infeasible', 'inconclusive')

# Relative tolerance on λ_max of verify_certificate
_VERIFY_TOLERANCE = 1e-8


@attr.s(slots=True, frozen=True)
class FeasibilityProblem:

    '''
    Find values of the variables of an LMI that make it negative definite

    Parameters
    ----------
    lmi : AffineLmi
    epsilon : float
        Lower bound on the eigenvalues of definite variables.
    '''

    lmi = attr.ib()
    epsilon = attr.ib(default=1e-9, converter=float)

    @epsilon.validator
    def _validate_epsilon(self, _, epsilon):
        if not epsilon > 0:
            raise ValueError(f'epsilon must be positive, got {epsilon}')

    @property
    def margin(self):
        'μ: ``≤ 0`` is enforced as ``≤ -μI``'
        return 1e-9 * (1 + np.linalg.norm(self.lmi.constant))

@attr.s(slots=True, frozen=True)
class SolverSettings:
    max_iterations = attr.ib(default=500, converter=int)
    tolerance = attr.ib(default=1e-10, converter=float)

    def options(self):
        return {
            'show_progress': False,
            'maxiters': self.max_iterations,
            'abstol': self.tolerance,
            'reltol': self.tolerance,
            'feastol': self.tolerance,
        }

@attr.s(slots=True, frozen=True)
class FeasibilityOutcome:

    '''
    Result of `solve_feasibility`

    Parameters
    ----------
    status : str
        'feasible', 'infeasible' or 'inconclusive'.
    certificate : Certificate or None
        Set iff feasible.
    t : float
        Largest eigenvalue of the (pruned) LMI at the final iterate, with the
        certificate normalization applied.
    iterations : int
    diagnostics : dict
    '''

    status = attr.ib()
    certificate = attr.ib()
    t = attr.ib(converter=float)
    iterations = attr.ib(converter=int)
    diagnostics = attr.ib(factory=dict)

    @status.validator
    def _validate_status(self, _, status):
        if status not in _STATUSES:
            raise ValueError(f'status must be one of {_STATUSES}, got {status!r}')

    @property
    def feasible(self):
        return self.status == 'feasible'

@attr.s(slots=True, frozen=True)
class VerificationReport:
    passed = attr.ib()
    max_eigenvalue = attr.ib()
    scale = attr.ib()
    min_eigenvalues = attr.ib()
    failures = attr.ib(converter=tuple)

def _variable_scales(lmi):
    scales = {}
    norms = np.linalg.norm(lmi.coefficients, axis=(1, 2))
    for name, unknowns in lmi.layout.slices().items():
        scale = norms[unknowns].max(initial=0)
        scales[name] = scale if scale > 0 else 1.0
    return scales

def _cone_program(lmi, epsilon, scales):
    '''
    Data of ``min t`` s.t. ``Σ z̃_j F̃_j - tI ≤ -F_0`` and the normalization
    box, in cvxopt's ``solvers.sdp`` form, over ``(z̃, t)``
    '''
    layout = lmi.layout
    k = layout.unknowns
    N = lmi.dim
    slices = layout.slices()

    column_scales = np.empty(k)
    for name, unknowns in slices.items():
        column_scales[unknowns] = scales[name]
    G_lmi = np.hstack((
        (lmi.coefficients / column_scales[:, None, None]).reshape(k, N * N).T,
        -np.eye(N).reshape(N * N, 1),
    ))
    Gs = [G_lmi]
    hs = [-lmi.constant]
    Gl = []
    hl = []
    for variable in layout.variables:
        unknowns = slices[variable.name]
        if variable.kind == 'definite':
            d = variable.size
            G = np.zeros((d * d, k + 1))
            G[:, unknowns] = np.array([E.ravel() for E in variable.basis()]).T
            Gs += [-G, G]
            hs += [-epsilon * np.eye(d), np.eye(d)]
        else:
            row = np.zeros(k + 1)
            row[unknowns] = 1
            Gl += [-row, row]
            hl += [0.0, 1.0]

    c = np.zeros(k + 1)
    c[-1] = 1
    matrix = lambda array: cvxopt.matrix(np.ascontiguousarray(array, dtype=float))
    program = {
        'c': matrix(c.reshape(-1, 1)),
        'Gs': [matrix(G) for G in Gs],
        'hs': [matrix(h) for h in hs],
    }
    if Gl:
        program['Gl'] = matrix(np.array(Gl))
        program['hl'] = matrix(np.array(hl).reshape(-1, 1))
    return program, column_scales

def _normalize(lmi, values):
    'Scale a homogeneous LMI solution so the smallest definite eigenvalue is 1'
    values = {
        name: max(value, 0.0) if isinstance(value, float) else value
        for name, value in values.items()
    }
    if np.any(lmi.constant):
        return values
    smallest = [
        np.linalg.eigvalsh(values[variable.name]).min()
        for variable in lmi.layout.variables
        if variable.kind == 'definite'
    ]
    if not smallest or min(smallest) <= 0:
        return values
    factor = 1 / min(smallest)
    return {name: value * factor for name, value in values.items()}

def solve_feasibility(problem, settings=SolverSettings()):
    '''
    Decide feasibility of an LMI

    Minimizes t subject to ``F(z) ≤ tI`` with definite variables in
    ``[εI, I]`` and scalars in ``[0, 1]``, with cvxopt's primal-dual
    interior-point solver. The final iterate decides: feasible when
    ``λ_max ≤ -μ`` relative to the scale of the evaluated matrix, infeasible
    when ``λ_max ≥ μ``, inconclusive in between.

    Parameters
    ----------
    problem : FeasibilityProblem
    settings : SolverSettings

    Returns
    -------
    FeasibilityOutcome

    Raises
    ------
    NumericalError
        If the solver returns no iterate.
    '''
    lmi = problem.lmi.prune()
    scales = _variable_scales(lmi)
    program, column_scales = _cone_program(lmi, problem.epsilon, scales)
    try:
        solution = cvxopt.solvers.sdp(options=settings.options(), **program)
    except (ArithmeticError, ValueError) as ex:
        raise NumericalError(f'SDP solver failed on LMI {lmi.name}: {ex}') from ex
    if solution['x'] is None:
        raise NumericalError(f'SDP solver returned no iterate for LMI {lmi.name} ({solution["status"]})')

    x = np.array(solution['x']).ravel()
    values = _normalize(lmi, lmi.layout.unpack(x[:-1] / column_scales))
    matrix = lmi.evaluate(values)
    if not np.isfinite(matrix).all():
        raise NumericalError(f'LMI {lmi.name} evaluated to non-finite values at the solver iterate')
    t = np.linalg.eigvalsh(matrix).max()
    relative_t = t / lmi.scale(values)
    mu = problem.margin
    if relative_t <= -mu:
        status = 'feasible'
    elif relative_t >= mu:
        status = 'infeasible'
    else:
        status = 'inconclusive'

    iterations = solution.get('iterations', 0)
    diagnostics = {
        'solver_status': solution['status'],
        'relative_t': float(relative_t),
        'pruned_dim': lmi.dim,
        'dynamic_range': lmi.dynamic_range(),
        'iterations': iterations,
    }
    logging.info(join_lines(
        f'''
        LMI {lmi.name}: {status} (λ_max={t:.3g}, relative {relative_t:.3g},
        {iterations} iterations, solver status {solution["status"]})
        '''
    ))
    certificate = None
    if status == 'feasible':
        certificate = Certificate(lmi.name, values, t, diagnostics)
    return FeasibilityOutcome(status, certificate, t, iterations, diagnostics)

def verify_certificate(lmi, certificate, epsilon=1e-9):
    '''
    Verify a certificate by eigenvalues alone

    Passes iff ``λ_max(F(z)) ≤ 1e-8 · scale`` with
    ``scale = 1 + ‖F_0‖ + Σ_j |z_j| ‖F_j‖``, every definite variable has
    ``λ_min ≥ ε/2`` and every scalar is nonnegative.

    Parameters
    ----------
    lmi : AffineLmi
    certificate : Certificate
    epsilon : float

    Returns
    -------
    VerificationReport

    Raises
    ------
    UserError
        If the certificate's variables do not match the LMI's.
    '''
    layout = lmi.layout
    if set(certificate.values) != set(layout.names):
        raise UserError(join_lines(
            f'''
            Certificate variables {sorted(certificate.values)} do not match the
            variables of LMI {lmi.name}: {sorted(layout.names)}
            '''
        ))
    for variable in layout.variables:
        value = certificate[variable.name]
        shape = () if variable.kind == 'nonnegative' else (variable.size, variable.size)
        if np.shape(value) != shape:
            raise UserError(join_lines(
                f'''
                Certificate variable {variable.name} has shape {np.shape(value)},
                expected {shape}
                '''
            ))

    failures = []
    max_eigenvalue = float(np.linalg.eigvalsh(lmi.evaluate(certificate.values)).max())
    scale = float(lmi.scale(certificate.values))
    if max_eigenvalue > _VERIFY_TOLERANCE * scale:
        failures.append(f'λ_max = {max_eigenvalue:.3g} > {_VERIFY_TOLERANCE} · {scale:.3g}')
    min_eigenvalues = {}
    for variable in layout.variables:
        value = certificate[variable.name]
        if variable.kind == 'definite':
            min_eigenvalues[variable.name] = float(np.linalg.eigvalsh(value).min())
            if min_eigenvalues[variable.name] < epsilon / 2:
                failures.append(f'λ_min({variable.name}) = {min_eigenvalues[variable.name]:.3g} < ε/2')
        else:
            min_eigenvalues[variable.name] = value
            if value < 0:
                failures.append(f'{variable.name} = {value:.3g} < 0')
    if failures:
        logging.warning(f'Certificate of LMI {lmi.name} failed verification: {"; ".join(failures)}')
    return VerificationReport(not failures, max_eigenvalue, scale, min_eigenvalues, failures)
