"""Fourier spectral solver for the relaxed nonlocal Stokes system."""

try:
    from ._nlstokes import *  # noqa: F401,F403
    from ._nlstokes import __version__  # noqa: F401
except ImportError:  # in-tree builds expose the module next to this package
    from _nlstokes import *  # noqa: F401,F403
    from _nlstokes import __version__  # noqa: F401
