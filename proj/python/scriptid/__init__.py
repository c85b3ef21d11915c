"""Directional-energy handwritten script identification.

Thin python layer over the C++ core: image binarization (Otsu), the six
diagonal/row/column deviation feature vectors, per-script diagonal-covariance
GMMs trained by EM, and average-log-likelihood classification.
"""

try:
    from ._scriptid import *  # noqa: F401,F403
    from ._scriptid import __doc__ as _core_doc  # noqa: F401
except ImportError:  # source-tree layout: extension built next to the package
    from _scriptid import *  # noqa: F401,F403

__version__ = "0.1.0"
