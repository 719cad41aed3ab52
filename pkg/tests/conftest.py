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

import logging
import signal

import pytest

from delayctl import (
    LtiPlant, PidPlant, DerivativeController, PidController
)


# http://stackoverflow.com/a/30091579/1031434
signal.signal(signal.SIGPIPE, signal.SIG_IGN)  # Ignore SIGPIPE

@pytest.fixture(autouse=True)
def common_init():
    logging.getLogger().setLevel(logging.INFO)

@pytest.fixture
def triple_integrator():
    return LtiPlant(
        A=[[0, 1, 0], [0, 0, 1], [0, 0, 0]], B=[[0], [0], [1]], C=[[1, 0, 0]],
    )

@pytest.fixture
def triple_ideal():
    return DerivativeController([-2e-4, -0.06, -0.342])

@pytest.fixture
def pid_plant():
    return PidPlant(a1=8.4, a2=0, b=35.71)

@pytest.fixture
def pid_ideal():
    return PidController(-10, -40, -0.65)
