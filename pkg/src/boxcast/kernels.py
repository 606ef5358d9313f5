"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure Python
implementation. Set ``BOXCAST_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("BOXCAST_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

css_residuals = _impl.css_residuals
css_objective = _impl.css_objective
step_down_violation = _impl.step_down_violation
nelder_mead_css = _impl.nelder_mead_css
ses_sse = _impl.ses_sse

PENALTY = _pykernels.PENALTY

__all__ = ["BACKEND", "PENALTY", "css_residuals", "css_objective",
           "step_down_violation", "nelder_mead_css", "ses_sse"]
