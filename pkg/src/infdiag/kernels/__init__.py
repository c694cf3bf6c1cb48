"""Policy-sweep kernels with backend selection at import time.

The compiled extension is preferred when built; the numpy implementation is a
drop-in fallback.  Set ``INFDIAG_KERNEL=python`` or ``INFDIAG_KERNEL=compiled``
to force a backend (the benchmark suite does), the latter raising if the
extension is unavailable.
"""

from __future__ import annotations

import os

_requested = os.environ.get("INFDIAG_KERNEL", "").strip().lower()

if _requested in ("python", "py"):
    from . import _pykern as _impl
    BACKEND = "python"
elif _requested in ("", "compiled", "c"):
    try:
        from . import _ckern as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        if _requested:
            raise
        from . import _pykern as _impl
        BACKEND = "python"
else:
    raise ValueError(f"INFDIAG_KERNEL={_requested!r}; expected 'python' or 'compiled'")

policy_eu = _impl.policy_eu
policy_sweep = _impl.policy_sweep

__all__ = ["BACKEND", "policy_eu", "policy_sweep"]
