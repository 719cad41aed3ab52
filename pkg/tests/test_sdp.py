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

import numpy as np
import pytest

from delayctl import (
    AffineLmi, Certificate, DecisionLayout, Variable, FeasibilityProblem,
    UserError, build_phi, build_phi_e, build_psi, map_gains, map_pid_gains,
    schur_complement, solve_feasibility, trigger_extension, verify_certificate
)


def _solve(lmi):
    return solve_feasibility(FeasibilityProblem(lmi))

class TestTripleIntegrator:

    @pytest.fixture
    def phi(self, triple_integrator, triple_ideal):
        ctrl = map_gains(triple_ideal, 0.044, (30, 60))
        return build_phi(triple_integrator, ctrl, 1e-3)

    def test_phi_feasible(self, phi):
        outcome = _solve(phi)
        assert outcome.status == 'feasible'
        assert outcome.t < 0
        report = verify_certificate(phi, outcome.certificate)
        assert report.passed, report.failures
        assert report.max_eigenvalue < 0

    def test_certificate_is_scale_invariant(self, phi):
        certificate = _solve(phi).certificate
        assert verify_certificate(phi, certificate.scaled(3)).passed

    def test_deterministic(self, phi):
        first = _solve(phi).certificate
        second = _solve(phi).certificate
        for name in phi.layout.names:
            assert np.array_equal(first[name], second[name])

    def test_schur_complement(self, phi):
        'Eliminating the H block keeps the certificate negative semidefinite'
        certificate = _solve(phi).certificate
        matrix = phi.evaluate(certificate.values)
        reduced = schur_complement(matrix, phi.dim - 1)
        scale = phi.scale(certificate.values)
        assert np.linalg.eigvalsh(reduced).max() <= 1e-8 * scale

    def test_phi_infeasible_at_large_h(self, triple_integrator, triple_ideal):
        ctrl = map_gains(triple_ideal, 0.2, (30, 60))
        outcome = _solve(build_phi(triple_integrator, ctrl, 1e-3))
        assert outcome.status == 'infeasible'
        assert outcome.certificate is None
        assert outcome.t > 0

    def test_phi_e_feasible(self, triple_integrator, triple_ideal):
        ctrl = map_gains(triple_ideal, 0.042, (30, 60))
        lmi = build_phi_e(triple_integrator, ctrl, 1e-3, 2e-3)
        outcome = _solve(lmi)
        assert outcome.feasible
        assert verify_certificate(lmi, outcome.certificate).passed
        assert np.linalg.eigvalsh(outcome.certificate['Omega']).min() > 0

    def test_trigger_extension(self, triple_integrator, triple_ideal, phi):
        'A certificate of Φ extends to Φ_e without event triggering'
        ctrl = map_gains(triple_ideal, 0.044, (30, 60))
        lmi_e = build_phi_e(triple_integrator, ctrl, 1e-3, 0)
        certificate = trigger_extension(lmi_e, _solve(phi).certificate)
        assert certificate.lmi_name == 'phi_e'
        assert certificate.margin < 0
        assert verify_certificate(lmi_e, certificate).passed

    def test_phi_e_sigma_zero_feasible(self, triple_integrator, triple_ideal):
        ctrl = map_gains(triple_ideal, 0.044, (30, 60))
        lmi = build_phi_e(triple_integrator, ctrl, 1e-3, 0)
        outcome = _solve(lmi)
        assert outcome.feasible
        assert outcome.diagnostics['pruned_dim'] == 10
        assert verify_certificate(lmi, outcome.certificate).passed

    def test_trigger_extension_needs_sigma_zero(self, triple_integrator, triple_ideal, phi):
        ctrl = map_gains(triple_ideal, 0.044, (30, 60))
        lmi_e = build_phi_e(triple_integrator, ctrl, 1e-3, 2e-3)
        with pytest.raises(ValueError):
            trigger_extension(lmi_e, _solve(phi).certificate)

class TestPid:

    @pytest.mark.parametrize('h, sigma', ((4.7e-3, 0), (4e-3, 9e-3)))
    def test_psi_feasible(self, pid_plant, pid_ideal, h, sigma):
        ctrl = map_pid_gains(pid_ideal, h, 7, sigma)
        lmi = build_psi(pid_plant, ctrl, 5)
        outcome = _solve(lmi)
        assert outcome.feasible
        report = verify_certificate(lmi, outcome.certificate)
        assert report.passed, report.failures
        for name in ('W', 'R', 'omega'):
            assert outcome.certificate[name] >= 0

class TestVerifyCertificate:

    @pytest.fixture
    def lmi(self):
        'Lyapunov inequality PA + AᵀP ≤ 0 of a stable A'
        layout = DecisionLayout([Variable('P', 2)])
        A = np.array([[0, 1], [-2, -3]])
        return AffineLmi.from_function(
            'lyapunov', [('x', 2)], layout,
            lambda values: values['P'] @ A + A.T @ values['P'],
        )

    def test_solve(self, lmi):
        outcome = _solve(lmi)
        assert outcome.feasible
        assert np.linalg.eigvalsh(outcome.certificate['P']).min() == pytest.approx(1)

    def test_zero_certificate(self, lmi):
        report = verify_certificate(lmi, Certificate('lyapunov', {'P': np.zeros((2, 2))}))
        assert not report.passed
        assert 'λ_min(P)' in report.failures[0]

    def test_negated_certificate(self, lmi):
        certificate = _solve(lmi).certificate.scaled(-1)
        report = verify_certificate(lmi, certificate)
        assert not report.passed
        assert report.max_eigenvalue > 0

    def test_layout_mismatch(self, lmi):
        with pytest.raises(UserError) as ex:
            verify_certificate(lmi, Certificate('lyapunov', {'Q': np.eye(2)}))
        assert 'do not match' in str(ex.value)

    def test_shape_mismatch(self, lmi):
        with pytest.raises(UserError) as ex:
            verify_certificate(lmi, Certificate('lyapunov', {'P': np.eye(3)}))
        assert 'shape' in str(ex.value)

    def test_unstable(self):
        layout = DecisionLayout([Variable('P', 1)])
        lmi = AffineLmi.from_function(
            'unstable', [('x', 1)], layout, lambda values: 2 * values['P'],
        )
        outcome = _solve(lmi)
        assert outcome.status == 'infeasible'

def test_epsilon_positive():
    layout = DecisionLayout([Variable('P', 1)])
    lmi = AffineLmi('trivial', [('x', 1)], layout, [[0]], [[[-1]]])
    with pytest.raises(ValueError):
        FeasibilityProblem(lmi, epsilon=0)
