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

from numpy.testing import assert_allclose
import numpy as np
import pytest

from delayctl import (
    Variable, DecisionLayout, AffineLmi, Certificate, DerivativeController,
    LtiPlant, UserError, build_phi, build_phi_e, build_psi, map_gains,
    map_pid_gains, pid_closed_loop, schur_complement, describe
)


@pytest.fixture
def triple_ctrl(triple_ideal):
    return map_gains(triple_ideal, 0.044, (30, 60))

@pytest.fixture
def phi(triple_integrator, triple_ctrl):
    return build_phi(triple_integrator, triple_ctrl, 1e-3)

@pytest.fixture
def pid_ctrl(pid_ideal):
    return map_pid_gains(pid_ideal, 4e-3, 7, sigma=9e-3)

def _random_values(layout, rng):
    return layout.unpack(rng.normal(size=layout.unknowns))

class TestDecisionLayout:

    @pytest.fixture
    def layout(self):
        return DecisionLayout([
            Variable('P', 3), Variable('W', 1, 'nonnegative'), Variable('R', 2),
        ])

    def test_unknowns(self, layout):
        assert layout.unknowns == 6 + 1 + 3
        assert layout.names == ('P', 'W', 'R')
        assert layout.slices()['R'] == slice(7, 10)

    def test_unpack_symmetric(self, layout):
        values = layout.unpack(np.arange(10.0))
        assert_allclose(values['P'], [[0, 1, 2], [1, 3, 4], [2, 4, 5]])
        assert values['W'] == 6.0
        assert_allclose(values['R'], [[7, 8], [8, 9]])
        assert_allclose(layout.pack(values), np.arange(10.0))

    def test_missing_values(self, layout):
        with pytest.raises(UserError) as ex:
            layout.pack({'P': np.eye(3)})
        assert 'R, W' in str(ex.value)

    def test_duplicate_names(self):
        with pytest.raises(ValueError):
            DecisionLayout([Variable('P', 2), Variable('P', 1)])

    def test_nonnegative_must_be_scalar(self):
        with pytest.raises(ValueError):
            Variable('W', 2, 'nonnegative')

    def test_basis(self):
        basis = Variable('P', 2).basis()
        assert len(basis) == 3
        assert_allclose(basis[1], [[0, 1], [1, 0]])

class TestAffineLmi:

    def test_asymmetric(self):
        layout = DecisionLayout([Variable('x', 1, 'nonnegative')])
        with pytest.raises(ValueError) as ex:
            AffineLmi('bad', [('a', 2)], layout, [[0, 1], [0, 0]], np.zeros((1, 2, 2)))
        assert 'not symmetric' in str(ex.value)

    def test_from_function(self):
        layout = DecisionLayout([Variable('P', 2), Variable('w', 1, 'nonnegative')])
        A = np.array([[0, 1], [-2, -3]])
        lmi = AffineLmi.from_function(
            'lyapunov', [('x', 2)], layout,
            lambda values: values['P'] @ A + A.T @ values['P'] + values['w'] * np.eye(2),
        )
        P = np.array([[2, 0.5], [0.5, 1]])
        assert_allclose(lmi.evaluate({'P': P, 'w': 0.5}), P @ A + A.T @ P + 0.5 * np.eye(2))
        assert_allclose(lmi.constant, 0)

    def test_prune(self):
        layout = DecisionLayout([Variable('w', 1, 'nonnegative')])
        coefficients = np.zeros((1, 3, 3))
        coefficients[0, 0, 0] = -1
        coefficients[0, 2, 2] = -2
        lmi = AffineLmi('sparse', [('a', 2), ('b', 1)], layout, np.zeros((3, 3)), coefficients)
        pruned = lmi.prune()
        assert pruned.dim == 2
        assert pruned.blocks == (('a', 1), ('b', 1))
        assert_allclose(pruned.evaluate({'w': 1.0}), [[-1, 0], [0, -2]])

    def test_dynamic_range(self):
        layout = DecisionLayout([Variable('w', 1, 'nonnegative')])
        lmi = AffineLmi('range', [('a', 1)], layout, [[1e-3]], [[[10]]])
        assert lmi.dynamic_range() == pytest.approx(1e4)

    def test_to_dict(self, phi):
        actual = AffineLmi.from_dict(phi.to_dict())
        assert actual.blocks == phi.blocks
        assert actual.layout == phi.layout
        assert_allclose(actual.coefficients, phi.coefficients)

class TestPhi:

    def test_structure(self, phi):
        assert phi.dim == 9
        assert phi.layout.unknowns == 11
        assert [name for name, _ in phi.blocks] == [
            'x', 'K0*delta0', 'K1*delta1', 'K2*delta2', 'K1*kappa1', 'K2*kappa2', 'H',
        ]
        assert phi.layout.names == ('P', 'W0', 'W1', 'W2', 'R1', 'R2')
        assert 'LMI phi: 9×9, 11 unknowns' in describe(phi)

    def test_homogeneous(self, phi):
        assert_allclose(phi.constant, 0)

    def test_affine_and_symmetric(self, phi):
        rng = np.random.default_rng(0)
        z1, z2 = rng.normal(size=(2, phi.layout.unknowns))
        F1, F2 = phi.evaluate_vector(z1), phi.evaluate_vector(z2)
        assert_allclose(F1, F1.T)
        assert_allclose(phi.evaluate_vector(0.3 * z1 + 0.7 * z2), 0.3 * F1 + 0.7 * F2, atol=1e-12)

    def test_identity_P(self, phi, triple_integrator, triple_ideal):
        'With P = I and W = R = 0 the state block is D + Dᵀ + 2αI'
        values = phi.layout.zero()
        values['P'] = np.eye(3)
        matrix = phi.evaluate(values)
        D = triple_ideal.closed_loop(triple_integrator)
        assert_allclose(matrix[:3, :3], D + D.T + 2e-3 * np.eye(3), atol=1e-12)
        assert_allclose(matrix[:3, 3:8], np.tile(triple_integrator.B, (1, 5)))
        assert_allclose(matrix[8, 8], 0)

    def test_alpha_not_positive(self, triple_integrator, triple_ctrl):
        with pytest.raises(UserError):
            build_phi(triple_integrator, triple_ctrl, 0)

    def test_relative_degree_mismatch(self, triple_integrator):
        ctrl = map_gains(DerivativeController([-1, -1]), 0.01, (2,))
        with pytest.raises(UserError) as ex:
            build_phi(triple_integrator, ctrl, 1e-3)
        assert 'Relative degree' in str(ex.value)

    def test_relative_degree_1(self):
        plant = LtiPlant(A=[[-1]], B=[[1]], C=[[1]])
        ctrl = map_gains(DerivativeController([-1]), 0.01, ())
        with pytest.raises(UserError) as ex:
            build_phi(plant, ctrl, 1e-3)
        assert 'r >= 2' in str(ex.value)

class TestPhiE:

    def test_structure(self, triple_integrator, triple_ctrl):
        lmi = build_phi_e(triple_integrator, triple_ctrl, 1e-3, 2e-3)
        assert lmi.dim == 11
        assert lmi.layout.unknowns == 12
        assert lmi.blocks[-2:] == (('e_k', 1), ('sigma', 1))

    def test_extends_phi(self, phi, triple_integrator, triple_ctrl):
        lmi = build_phi_e(triple_integrator, triple_ctrl, 1e-3, 2e-3)
        values = _random_values(lmi.layout, np.random.default_rng(1))
        phi_values = {name: value for name, value in values.items() if name != 'Omega'}
        assert_allclose(lmi.evaluate(values)[:9, :9], phi.evaluate(phi_values), atol=1e-12)

    def test_sigma_zero_prunes_to_phi_with_error_block(self, triple_integrator, triple_ctrl):
        lmi = build_phi_e(triple_integrator, triple_ctrl, 1e-3, 0).prune()
        assert lmi.dim == 10
        assert 'sigma' not in dict(lmi.blocks)

    def test_sigma_out_of_range(self, triple_integrator, triple_ctrl):
        with pytest.raises(UserError):
            build_phi_e(triple_integrator, triple_ctrl, 1e-3, 1)

class TestPsi:

    def test_structure(self, pid_plant, pid_ctrl):
        lmi = build_psi(pid_plant, pid_ctrl, 5)
        assert lmi.dim == 13
        assert lmi.layout.unknowns == 15
        assert [variable.kind for variable in lmi.layout.variables] == [
            'definite', 'definite', 'nonnegative', 'nonnegative', 'nonnegative',
        ]

    def test_closed_loop_matches_ideal(self, pid_plant, pid_ideal, pid_ctrl):
        'Without sampling errors the sampled PID loop has the ideal dynamics'
        A, A_v, B, C = pid_closed_loop(pid_plant, pid_ctrl)
        assert_allclose(A, pid_plant.closed_loop(pid_ideal), atol=1e-12)
        assert A_v.shape == (3, 3)
        assert_allclose(B, [[0], [35.71], [0]])
        assert_allclose(C, [[1, 0, 0]])

    def test_affine_and_symmetric(self, pid_plant, pid_ctrl):
        lmi = build_psi(pid_plant, pid_ctrl, 5)
        rng = np.random.default_rng(2)
        z1, z2 = rng.normal(size=(2, lmi.layout.unknowns))
        F1, F2 = lmi.evaluate_vector(z1), lmi.evaluate_vector(z2)
        assert_allclose(F1, F1.T)
        assert_allclose(lmi.evaluate_vector(z1 - z2), F1 - F2, atol=1e-9)

    def test_sigma_zero(self, pid_plant, pid_ctrl):
        lmi = build_psi(pid_plant, pid_ctrl.with_sigma(0), 5)
        assert lmi.prune().dim == 12

class TestCertificate:

    def test_scaled(self):
        certificate = Certificate('phi', {'P': np.eye(2), 'w': 0.5}, margin=-1)
        scaled = certificate.scaled(3)
        assert_allclose(scaled['P'], 3 * np.eye(2))
        assert scaled['w'] == 1.5
        assert scaled.margin == -3

    def test_to_dict(self):
        certificate = Certificate('psi', {'P': [[2, 1], [1, 2]], 'omega': 0.25}, -0.5, {'iterations': 12})
        actual = Certificate.from_dict(certificate.to_dict())
        assert actual.lmi_name == 'psi'
        assert_allclose(actual['P'], [[2, 1], [1, 2]])
        assert actual['omega'] == 0.25
        assert actual.diagnostics == {'iterations': 12}

def test_schur_complement():
    matrix = np.array([[-3.0, 1], [1, -2]])
    assert_allclose(schur_complement(matrix, 1), [[-3 - 1 / -2]])
