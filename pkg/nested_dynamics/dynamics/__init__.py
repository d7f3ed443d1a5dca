from .fields import (rd_field, nrd_field, nrd_extr_field, growth_rates,
                     class_field, make_field, check_state, check_interior)
from .protocol import (ppi_switch_rates, nppi_switch_rates, imitation_rates,
                       extrinsic_switch_rates, mean_dynamics)
from .flow import rk4_step, FlowState, Trajectory
from .env import PopulationDynamicsEnv
from .integrator import integrate, run_env
