"""Configuration constants and defaults for model-free control simulations."""

import math

# Three-tank benchmark constants
TANK_SECTION = 0.0154  # S, tank cross-section, m^2
PIPE_SECTION = 5e-5  # S_p, m^2 inter-tank pipe section
GRAVITY = 9.81  # g, m/s^2
TANK_VISCOSITY = (0.5, 0.675, 0.5)  # mu_1, mu_2, mu_3
TANK_INITIAL_LEVELS = (0.1, 0.1, 0.1)  # m
TANK_PUMP_MAX = 1e-4  # m^3/s, pumps cannot extract water so the lower bound is 0
LEVEL_CLAMP_TOLERANCE = 1e-12  # m, levels below -tol are reported before clamping

# Linear 2x2 benchmark transfer matrix (1-based output/input, roots of each factor)
# Entry (1,2) is zero. Entry (1,1) keeps its common factor s unless cancelled.
LINEAR_BENCHMARK_ENTRIES = (
    {"output": 1, "input": 1, "zeros": [0.0, 0.0, 0.0], "poles": [-0.01, -0.1, 1.0, 0.0]},
    {"output": 2, "input": 1, "zeros": [-1.0], "poles": [-0.003, 0.03, -0.3, -3.0]},
    {"output": 2, "input": 2, "zeros": [0.0, 0.0], "poles": [-0.004, -0.04, 0.4, -4.0]},
)

# Ultra-local model gains used by the benchmarks
ALPHA_LINEAR = 10.0
ALPHA_THREE_TANK = 200.0

# Intelligent PID gains: (K_P, K_I, K_D)
GAINS_LINEAR_CHANNEL_1 = (1.0, 0.0, 0.0)
GAINS_LINEAR_CHANNEL_2 = (50.0, 50.0, 10.0)
GAINS_THREE_TANK = (10.0, 2e-2, 0.0)

# Algebraic differentiator defaults
INTEGRATION_ORDER_OFFSET = 2  # default nu = N + 2
STEP_TOLERANCE = 1e-9  # relative tolerance for T being a multiple of h
KERNEL_CONDITION_LIMIT = 1e12  # larger condition numbers reject the (N, nu, T, h) combination
DEFAULT_WINDOW = {
    "linear": 0.1,
    "three_tank": 1.0,
}

# Closed-loop simulation defaults
DEFAULT_PERIOD = {
    "linear": 0.01,
    "three_tank": 0.1,
}
RK4_SUBSTEPS = 10  # plant integration step = h / RK4_SUBSTEPS
DIVERGENCE_THRESHOLD = 1e6  # |u| or |y| beyond this aborts the run
NOISE_STD = math.sqrt(0.01)  # N(0, 0.01) read as (mean, variance)
DEFAULT_SEED = 42

# Control modes
MODE_MODEL_FREE = "model_free"
MODE_CLASSIC_PID = "classic_pid"
MODES = {MODE_MODEL_FREE, MODE_CLASSIC_PID}

# Plant types
PLANT_LINEAR = "linear"
PLANT_THREE_TANK = "three_tank"
PLANT_TYPES = {PLANT_LINEAR, PLANT_THREE_TANK}

# Reference trajectories
DEFAULT_SMOOTHNESS = 2  # quintic transitions

# CSV output
CSV_FLOAT_FORMAT = "%.17g"
CHANNEL_COLUMNS = ("ref", "dref", "y_true", "y_meas", "y_denoised", "dy_est", "F", "e")
SECOND_DERIVATIVE_COLUMN = "ddy_est"

# CLI exit codes
EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_DIVERGED = 2

# Logging
LOG_ENV_VAR = "MFC_LOG"
DEFAULT_LOG_LEVEL = "WARNING"

# Canned scenarios shipped as package data
CANNED_SCENARIOS = {
    "linear-2x2": "linear-2x2.yaml",
    "three-tank": "three-tank.yaml",
}
