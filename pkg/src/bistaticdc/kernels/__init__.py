"""Kernel backend selection.

The compiled extension is used when importable; otherwise the pure-Python
reference implementation takes over. Both produce bit-identical output (the
test suite enforces it), so the choice affects speed only. Set
BISTATICDC_PURE_PY=1 to force the reference backend.
"""

import os

from . import _reference

if os.environ.get("BISTATICDC_PURE_PY") == "1":
    _active = _reference
    BACKEND = "reference"
else:
    try:
        from . import _compiled as _active  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _active = _reference
        BACKEND = "reference"

uniform_block = _active.uniform_block
oracle_trials = _active.oracle_trials
geometric_trials = _active.geometric_trials


def available_backends() -> dict:
    """Importable backend modules keyed by name (for benchmarks and tests)."""
    backends = {"reference": _reference}
    try:
        from . import _compiled

        backends["compiled"] = _compiled
    except ImportError:
        pass
    return backends
