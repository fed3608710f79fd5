import os
from pathlib import Path

import yaml

REPO_ROOT = Path(__file__).resolve().parents[2]
DEFAULT_CONFIG_PATH = Path(os.environ.get("DELAM_CONFIG", REPO_ROOT / "config.yaml"))


def load_config(config_path=DEFAULT_CONFIG_PATH):
    """Load configuration from YAML file."""
    with open(config_path, "r") as f:
        return yaml.safe_load(f)


_config = load_config()

# Output paths
DATA_DIR = _config["data"]["dir"]

# Special-function envelope
MAX_ORDER = int(_config["specfun"]["max_order"])
MAX_ABS_ARGUMENT = float(_config["specfun"]["max_abs_argument"])
MIN_IMAG_RATIO = float(_config["specfun"]["min_imag_ratio"])

# Separation of variables
SOV_TRUNCATION = int(_config["sov"]["truncation"])
SOV_ADAPTIVE = bool(_config["sov"]["adaptive"])
SOV_TAIL_TOL = float(_config["sov"]["tail_tol"])
SOV_DET_TOL = float(_config["sov"]["det_tol"])
SOV_RESIDUAL_TOL = float(_config["sov"]["residual_tol"])

# Born approximation quadrature
BORN_RADIAL_NODES = int(_config["born"]["radial_nodes"])
BORN_ANGULAR_NODES = int(_config["born"]["angular_nodes"])
BORN_BOUNDARY_NODES = int(_config["born"]["boundary_nodes"])

# Boundary integral solver
BIE_FD_STEP = float(_config["bie"]["fd_step"])
BIE_FD_REFERENCE_FACES = int(_config["bie"]["fd_reference_faces"])
BIE_NODES_PER_FACE = int(_config["bie"]["nodes_per_face"])
BIE_COND_WARN = float(_config["bie"]["cond_warn"])
BIE_RESIDUAL_TOL = float(_config["bie"]["residual_tol"])

# Imaging
GRID_SIZE = int(_config["imaging"]["grid_size"])
GRID_WINDOW = tuple(float(v) for v in _config["imaging"]["window"])
RHO = float(_config["imaging"]["rho"])
CHUNK_SIZE = int(_config["imaging"]["chunk_size"])

# Noise
NOISE_NORM_KIND = _config.get("noise", {}).get("norm_kind", "frobenius")
NOISE_SEED = int(_config.get("noise", {}).get("seed", 2024))

# Transmission eigenvalues
NEWTON_STEP = float(_config["tev"]["newton_step"])
NEWTON_TOL = float(_config["tev"]["newton_tol"])
NEWTON_MAX_ITER = int(_config["tev"]["newton_max_iter"])
CONTOUR_SAMPLES = int(_config["tev"]["contour_samples"])
CONTOUR_MAX_DEPTH = int(_config["tev"]["max_depth"])
BEYN_N_QUAD = int(_config["tev"]["n_quad"])
BEYN_ELL = int(_config["tev"]["ell"])
BEYN_RANK_TOL = float(_config["tev"]["rank_tol"])
BEYN_SEED = int(_config["tev"]["seed"])
TEV_RESIDUAL_TOL = float(_config["tev"]["residual_tol"])
