from cornershuffle import comparison  # noqa: F401
from cornershuffle import geometry  # noqa: F401
from cornershuffle import mixing  # noqa: F401
from cornershuffle import perm  # noqa: F401
from cornershuffle import spectral  # noqa: F401
from cornershuffle import walk  # noqa: F401

from .version import __version__  # noqa: F401
