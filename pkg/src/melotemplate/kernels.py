"""Hot loops, compiled when the extension is built and pure Python otherwise.

Set ``MELOTEMPLATE_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
viterbi_lex = _kernels_py.viterbi_lex
dtw_int = _kernels_py.dtw_int

if not os.environ.get("MELOTEMPLATE_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        viterbi_lex = _compiled.viterbi_lex
        dtw_int = _compiled.dtw_int

__all__ = ["BACKEND", "viterbi_lex", "dtw_int"]
