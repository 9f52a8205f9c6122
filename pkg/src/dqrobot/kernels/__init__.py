"""Kernel backend selection.

The numeric kernels live in ``_impl`` as plain numpy functions.  By default
(and when ``DQROBOT_BACKEND=numba``) they are compiled in place with
numba's ``njit``; a pristine interpreted copy of the module is kept
around as ``numpy_backend`` so the two can be compared side by side (see
``benchmarks/bench_backends.py``).  Set ``DQROBOT_BACKEND=numpy`` to skip
compilation entirely and run on the fallback.  The choice is read once at
import time.
"""

import importlib.util
import os
import sys

from . import _impl

_ENV_VAR = "DQROBOT_BACKEND"


def _plain_module_copy():
    name = __name__ + "._impl_plain"
    spec = importlib.util.spec_from_file_location(name, _impl.__file__)
    mod = importlib.util.module_from_spec(spec)
    sys.modules[name] = mod
    spec.loader.exec_module(mod)
    return mod


def _jit_in_place(mod):
    import numba

    jit = numba.njit(cache=True)
    # Rebind in dependency order so jitted callers resolve jitted callees.
    for name in mod.JIT_FUNCTIONS:
        setattr(mod, name, jit(getattr(mod, name)))
    return mod


_choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
if _choice not in ("", "auto", "numba", "numpy"):
    raise ValueError(f"unknown {_ENV_VAR}={_choice!r}; use 'numba', 'numpy', or 'auto'")

numba_backend = None
if _choice in ("", "auto", "numba"):
    try:
        import numba  # noqa: F401
    except ImportError:
        if _choice == "numba":
            raise ImportError(f"{_ENV_VAR}=numba requested but numba is not installed")
    else:
        numpy_backend = _plain_module_copy()
        numba_backend = _jit_in_place(_impl)

if numba_backend is None:
    numpy_backend = _impl

active = numba_backend if numba_backend is not None else numpy_backend
BACKEND = "numba" if numba_backend is not None else "numpy"

OK = _impl.OK
ERR_DEGENERATE = _impl.ERR_DEGENERATE
ERR_SINGULAR = _impl.ERR_SINGULAR
ERR_MAXITERS = _impl.ERR_MAXITERS
ERR_STALLED = _impl.ERR_STALLED
