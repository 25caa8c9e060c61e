import os
import sys
from pathlib import Path
from dotenv import load_dotenv

# When packaged as a frozen executable, files are next to the executable.
# In dev mode, files are in the script's directory.
if getattr(sys, "frozen", False):
    BASE_DIR = Path(sys.executable).resolve().parent
else:
    BASE_DIR = Path(__file__).resolve().parent

load_dotenv(BASE_DIR / ".env")

# Logging
ECC_LOG = os.getenv("ECC_LOG", "WARNING").upper()

# LP backend ("simplex" = bundled, "highs" = scipy/HiGHS)
LP_SOLVER = os.getenv("ECC_LP_SOLVER", "simplex")

# Numerical tolerances
FEASIBILITY_TOL = float(os.getenv("ECC_FEASIBILITY_TOL", "1e-9"))
THRESHOLD_GUARD = float(os.getenv("ECC_THRESHOLD_GUARD", "1e-9"))
COMPARE_TOL = float(os.getenv("ECC_COMPARE_TOL", "1e-6"))

# Bundled simplex
SIMPLEX_MAX_ITERATIONS = int(os.getenv("ECC_SIMPLEX_MAX_ITERATIONS", "200000"))
SIMPLEX_REFACTOR_INTERVAL = int(os.getenv("ECC_SIMPLEX_REFACTOR_INTERVAL", "64"))
SIMPLEX_DEGENERATE_LIMIT = int(os.getenv("ECC_SIMPLEX_DEGENERATE_LIMIT", "50"))

# Exact search guards
BRUTE_FORCE_LIMIT = int(os.getenv("ECC_BRUTE_FORCE_LIMIT", str(10**7)))
ENUMERATION_LIMIT = int(os.getenv("ECC_ENUMERATION_LIMIT", str(10**7)))
BRANCHING_MAX_DEPTH = int(os.getenv("ECC_BRANCHING_MAX_DEPTH", "30"))

# Experiment harness
EXPERIMENT_WORKERS = int(os.getenv("ECC_EXPERIMENT_WORKERS", "1"))

# Bundled data
DATA_DIR = BASE_DIR / os.getenv("ECC_DATA_DIR", "data")
