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
    LtiPlant, PidPlant, DerivativeController, PidController, ConfigError,
    UserError, relative_degree, stacked_output_map, decay_rate
)


class TestLtiPlant:

    def test_dimensions(self, triple_integrator):
        plant = triple_integrator
        assert (plant.n, plant.m, plant.l) == (3, 1, 1)

    def test_read_only(self, triple_integrator):
        with pytest.raises(ValueError):
            triple_integrator.A[0, 0] = 1

    def test_inconsistent_shapes(self):
        with pytest.raises(ValueError) as ex:
            LtiPlant(A=np.eye(2), B=[[0], [0], [1]], C=[[1, 0]])
        assert 'B must have 2 rows' in str(ex.value)

    def test_non_finite(self):
        with pytest.raises(ValueError):
            LtiPlant(A=[[np.nan]], B=[[1]], C=[[1]])

    def test_from_dict_missing_matrix(self):
        with pytest.raises(ConfigError) as ex:
            LtiPlant.from_dict({'A': [[0]], 'B': [[1]]})
        assert ex.value.pointer == '/plant/C'

    def test_from_dict_not_a_number(self):
        with pytest.raises(ConfigError) as ex:
            LtiPlant.from_dict({'A': [[0, 'x'], [0, 0]], 'B': [[0], [1]], 'C': [[1, 0]]})
        assert ex.value.pointer == '/plant/A/0/1'

    def test_to_dict(self, triple_integrator):
        plant = LtiPlant.from_dict(triple_integrator.to_dict())
        assert_allclose(plant.A, triple_integrator.A)
        assert_allclose(plant.C, triple_integrator.C)

class TestPidPlant:

    def test_state_space(self, pid_plant):
        A, B, C = pid_plant.state_space()
        assert_allclose(A, [[0, 1], [0, -8.4]])
        assert_allclose(B, [[0], [35.71]])
        assert_allclose(C, [[1, 0]])

    def test_zero_b(self):
        with pytest.raises(ValueError):
            PidPlant(a1=1, a2=1, b=0)
        with pytest.raises(ConfigError) as ex:
            PidPlant.from_dict({'a1': 1, 'a2': 1, 'b': 0})
        assert ex.value.pointer == '/plant/b'

    def test_from_dict_missing(self):
        with pytest.raises(ConfigError) as ex:
            PidPlant.from_dict({'a1': 1, 'b': 1})
        assert ex.value.pointer == '/plant/a2'

    def test_ideal_decay_rate(self, pid_plant, pid_ideal):
        assert decay_rate(pid_plant.closed_loop(pid_ideal)) == pytest.approx(10.4, abs=0.05)

class TestDerivativeController:

    def test_scalar_gains(self, triple_ideal):
        assert triple_ideal.r == 3
        assert triple_ideal.gains[2].shape == (1, 1)
        assert_allclose(triple_ideal.stacked(), [[-2e-4, -0.06, -0.342]])

    def test_inconsistent_gains(self):
        with pytest.raises(ValueError) as ex:
            DerivativeController([[[1, 2]], [[1]]])
        assert '2nd gain' in str(ex.value)

    def test_no_gains(self):
        with pytest.raises(ConfigError) as ex:
            DerivativeController.from_dict({'gains': []})
        assert ex.value.pointer == '/controller/gains'

    def test_ideal_closed_loop_is_stable(self, triple_integrator, triple_ideal):
        closed_loop = triple_ideal.closed_loop(triple_integrator)
        assert_allclose(closed_loop, [[0, 1, 0], [0, 0, 1], [-2e-4, -0.06, -0.342]])
        assert decay_rate(closed_loop) > 1e-3

class TestPidController:

    def test_from_dict(self):
        controller = PidController.from_dict({'kp': -10, 'ki': -40, 'kd': -0.65})
        assert controller.to_dict() == {'kp': -10, 'ki': -40, 'kd': -0.65}

    def test_bool_is_not_a_number(self):
        with pytest.raises(ConfigError) as ex:
            PidController.from_dict({'kp': True, 'ki': -40, 'kd': -0.65})
        assert ex.value.pointer == '/controller/kp'

class TestRelativeDegree:

    def test_triple_integrator(self, triple_integrator):
        assert relative_degree(triple_integrator, 3) == 3
        assert relative_degree(triple_integrator, 5) == 3

    def test_first_order(self):
        plant = LtiPlant(A=[[-1]], B=[[1]], C=[[1]])
        assert relative_degree(plant, 3) == 1

    def test_none_up_to_r_max(self, triple_integrator):
        with pytest.raises(UserError) as ex:
            relative_degree(triple_integrator, 2)
        assert 'no relative degree' in str(ex.value)

    def test_zero_markov_parameter_within_tolerance(self):
        plant = LtiPlant(A=[[0, 1], [0, 0]], B=[[1e-20], [1]], C=[[1, 0]])
        assert relative_degree(plant, 2) == 2

    def test_ill_conditioned(self):
        plant = LtiPlant(A=[[0, 1], [0, 0]], B=[[5e-9], [1]], C=[[1, 0]])
        with pytest.raises(UserError) as ex:
            relative_degree(plant, 2)
        assert 'ill-conditioned' in str(ex.value)

def test_stacked_output_map(triple_integrator):
    assert_allclose(stacked_output_map(triple_integrator, 3), np.eye(3))
    assert stacked_output_map(triple_integrator, 1).shape == (1, 3)

def test_decay_rate_unstable():
    assert decay_rate([[1, 0], [0, -2]]) == pytest.approx(-1)
