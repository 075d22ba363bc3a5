"""Kernel backend selection.

The compiled core is used when it imported cleanly; FAIRSEL_PURE=1
forces the numpy fallback. Both backends are drop-in equivalent and
grow bit-identical trees from the same seed.
"""

import os

from . import _pure

if os.environ.get("FAIRSEL_PURE", "0") == "1":
    _impl = _pure
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND
fit_tree = _impl.fit_tree
predict_tree = _impl.predict_tree

__all__ = ["BACKEND", "fit_tree", "predict_tree", "pure"]

pure = _pure
