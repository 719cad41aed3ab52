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

__version__ = '1.0.0'

from ._util import (
    UserError, ConfigError, NumericalError, join_lines, open_text, init_logging
)
from ._csv import parse_csv, read_table
from ._model import (
    LtiPlant, PidPlant, DerivativeController, PidController, relative_degree,
    stacked_output_map, decay_rate
)
from ._synthesis import (
    SampledController, SampledPidController, build_M, map_gains,
    choose_delays, rule_based_controller, map_pid_gains, choose_pid_delay,
    rule_based_pid_controller
)
from ._lmi import (
    Variable, DecisionLayout, AffineLmi, Certificate, build_phi, build_phi_e,
    build_psi, pid_closed_loop, schur_complement, trigger_extension, describe
)
from ._sdp import (
    FeasibilityProblem, SolverSettings, FeasibilityOutcome, VerificationReport,
    solve_feasibility, verify_certificate
)
from ._search import SearchReport, max_h, sweep_q, max_sigma
from ._sim import (
    SimTrace, EventLog, LyapunovDiagnostic, simulate_sampled,
    simulate_event_triggered, simulate_pid, estimate_decay_rate,
    evaluate_lyapunov, random_initial_conditions, simulate_batch,
    transmission_statistics, sample_count
)
from ._cli import RunConfig, parse_config, run, reproduce, main
