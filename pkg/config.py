import os
from pathlib import Path

# Relative tolerance of every "equals zero" decision in the numerical services.
# Can be overridden using the GQMS_TOL environment variable.
DEFAULT_TOL = float(os.environ.get("GQMS_TOL", "1e-9"))

# Bound on |n_j| in the integer-relation search between rotation angles.
RATIONAL_NMAX = int(os.environ.get("GQMS_NMAX", "12"))

# The integer-relation search stops after this many candidate vectors and
# records that the search was truncated.
RATIONAL_MAX_CANDIDATES = int(os.environ.get("GQMS_RATIONAL_MAX_CANDIDATES", "2000000"))

# A symplectic eigenvalue within this distance of 1 counts as a pure direction.
PURITY_TOL = float(os.environ.get("GQMS_PURITY_TOL", "1e-7"))

# Significant digits written to reports and trajectory files.
REPORT_DIGITS = int(os.environ.get("GQMS_REPORT_DIGITS", "15"))
TRAJECTORY_DIGITS = int(os.environ.get("GQMS_TRAJECTORY_DIGITS", "9"))

# Lyapunov equations above this dimension switch from the Kronecker system
# to Bartels-Stewart.
LYAPUNOV_MAX_DIM = int(os.environ.get("GQMS_LYAPUNOV_MAX_DIM", "40"))

LOG_LEVEL = os.environ.get("GQMS_LOG_LEVEL", "WARNING")

# Celery transport for `batch`. With GQMS_CELERY_EAGER=1 (default) tasks run
# in-process and no broker is contacted.
CELERY_BROKER_URL = os.environ.get("CELERY_BROKER_URL", "memory://")
CELERY_RESULT_BACKEND = os.environ.get("CELERY_RESULT_BACKEND", "cache+memory://")
CELERY_ALWAYS_EAGER = os.environ.get("GQMS_CELERY_EAGER", "1") == "1"

# Directory with the bundled example models.
GALLERY_DIR = os.environ.get("GQMS_GALLERY_DIR", str(Path(__file__).parent / "gallery"))
