"""Select the compute-kernel backend at import time.

The compiled extension (`persuade._kernels`) is used when available; the
pure-numpy module is the fallback and the semantics reference.  Set
PERSUADE_BACKEND=python to force the fallback (useful for A/B checks and
benchmarks).
"""

import os

from . import _kernels_py

if os.environ.get("PERSUADE_BACKEND", "").lower() == "python":
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.IMPL

sender_values = kernels.sender_values
receiver_values = kernels.receiver_values
eval_supports = kernels.eval_supports
multistart_nm = kernels.multistart_nm
# not hot; one implementation is enough
barycentric_to_beliefs = _kernels_py.barycentric_to_beliefs
