"""Package version, read from the installed distribution metadata.

Report bytes depend on the numerical stack as well as on this package, so
`--version` also names the numpy and scipy it runs against.
"""

from importlib.metadata import PackageNotFoundError, version

import numpy as np
import scipy

DISTRIBUTION = "cocycle-lab"
FALLBACK_VERSION = "1.0.0"


def _installed_version() -> str:
    try:
        return version(DISTRIBUTION)
    except PackageNotFoundError:
        # running from a source tree without an install
        return FALLBACK_VERSION


PACKAGE_VERSION = _installed_version()


def get_version() -> str:
    """Return a string like 'cocycle-lab 1.0.0 (numpy 1.26.4, scipy 1.11.4)'."""
    return f"{DISTRIBUTION} {PACKAGE_VERSION} (numpy {np.__version__}, scipy {scipy.__version__})"
