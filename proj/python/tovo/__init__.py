"""Taxonomy-voting dataset pipeline.

Thin re-export of the compiled core. The heavy lifting (panel voting,
consensus ranking, rationale selection, dataset I/O) lives in the C++
extension; this package exists so `import tovo` works from a wheel.
"""

try:
    # wheel layout: extension installed inside the package
    from ._tovo import *  # noqa: F401,F403
    from ._tovo import __version__  # noqa: F401
except ImportError:
    # in-tree layout: extension on PYTHONPATH from the cmake build dir
    from _tovo import *  # noqa: F401,F403
    from _tovo import __version__  # noqa: F401
