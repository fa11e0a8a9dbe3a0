"""CSL collapse-noise damping of neutral-meson oscillations."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, default_registry

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]


def species(name):
    """Species from the built-in configuration."""
    return default_registry().species(name)


def adler():
    """CSL parameters of the Adler preset."""
    return default_registry().csl_preset("adler")
