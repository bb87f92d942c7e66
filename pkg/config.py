import os
from dotenv import load_dotenv

# Load environment variables from .env
load_dotenv()

# === Run defaults ===
DEFAULT_SEED = int(os.getenv("AMPLI_SEED", 0))
DEFAULT_SAMPLES = int(os.getenv("AMPLI_SAMPLES", 20))
DEFAULT_MODE = os.getenv("AMPLI_MODE", "exact")

# === Run config file (JSON defaults merged under CLI flags) ===
RUN_CONFIG_FILE = os.getenv("AMPLI_RUN_CONFIG", "run_config.json")


class Config:
    """Central numeric configuration for the limit amplituhedron toolkit"""

    # === Tolerances ===
    TAU_RANK = float(os.getenv("AMPLI_TOL_RANK", 1e-8))  # relative sigma_min / sigma_max
    TAU_ROOT = float(os.getenv("AMPLI_TOL_ROOT", 1e-9))
    TAU_ORTHO = float(os.getenv("AMPLI_TOL_ORTHO", 1e-9))

    # === Membership path tracking ===
    PATH_RETRIES = int(os.getenv("AMPLI_PATH_RETRIES", 8))
    PATH_STEPS = 2 ** 10
    BISECTION_WIDTH = 1e-12
    COMMON_ROOT_GAP = 1e-5  # max distance between the f and g roots at a crossing
    VERTEX_BAND = 1e-7  # crossings this close to gamma(0) / gamma(1) are ambiguous

    # === Canonical form ===
    POLE_RADIUS = float(os.getenv("AMPLI_POLE_RADIUS", 1e-3))
    CONTOUR_POINTS = 256
    POLE_DECADES = (1e-3, 1e-4, 1e-5, 1e-6)
    MAX_POLE_DRIFT = 0.05

    # === Samplers ===
    SAMPLER_RETRIES = 16
    TNN_RETRIES = 32
    RANDOM_ENTRY_BOUND = 5
    MAX_DENOMINATOR = 60

    # === Suites ===
    MAX_UNDETERMINED_RATE = 0.01
    REFINEMENT_DEPTH = 10  # facet refinement goes down to 2**10 intervals
    WORKERS = int(os.getenv("AMPLI_WORKERS", 1))

    # === Logging ===
    LOG_LEVEL = os.getenv("AMPLI_LOG_LEVEL", "INFO")
    LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


# Debug check when running directly
if __name__ == "__main__":
    print("✅ Config loaded successfully")
    print(f"Rank tolerance: {Config.TAU_RANK}")
    print(f"Root tolerance: {Config.TAU_ROOT}")
    print(f"Path retries: {Config.PATH_RETRIES} x {Config.PATH_STEPS} steps")
    print(f"Run config file: {RUN_CONFIG_FILE}")
