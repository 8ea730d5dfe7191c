"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: package-wide constants and defaults
"""

CONTEXT_SETTINGS = dict(help_option_names=["-h", "--help"])

# Largest deviation scale accepted by the stationary solver
EPS_CAP = 0.5

DEFAULT_ALPHA = 0.4
DEFAULT_QUAD_ORDER = 24
DEFAULT_SAMPLE_COUNT = 513
DEFAULT_PICARD_TOL = 1e-10
DEFAULT_MAX_ITER = 200
DEFAULT_SERIES_TOL = 1e-12
DEFAULT_J_TOL = 1e-12
DEFAULT_GAMMA_TOL = 1e-6
DEFAULT_BALL_SLACK = 1.0

DEFAULT_DENSITY_HALF_WIDTH = 3.0
DEFAULT_DENSITY_COUNT = 4096
DEFAULT_EQUIL_TOL = 1e-8
DEFAULT_MAX_STEPS = 500000
DEFAULT_TRACE_EVERY = 100

DEFAULT_SWEEP = (0.2, 0.1, 0.05, 0.025)
DEFAULT_REGION = 1.0
DEFAULT_WINDOW_RADIUS = 2.0

# Gaussian blur kernel is truncated at GAUSSIAN_REACH * eps
GAUSSIAN_REACH = 6.0
# Negative density values above this (relative to the max) are FFT noise
CLAMP_TOLERANCE = 1e-10

# Stationarity residual thresholds for exit codes
STATIONARY_CERTIFICATE_TOL = 1e-4
MARCH_CERTIFICATE_TOL = 1e-5
