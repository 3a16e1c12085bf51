"""Time-frequency analysis on the finite cyclic model."""

from .errors import NumericalError, TFError, ValidationError
from .signals import *  # noqa: F401,F403
from .lattice import *  # noqa: F401,F403
from .windows import *  # noqa: F401,F403
from .operators import *  # noqa: F401,F403
from .tfr import *  # noqa: F401,F403
from .gabor import *  # noqa: F401,F403
from .zak import *  # noqa: F401,F403
from .sampling import *  # noqa: F401,F403
from .bargmann import *  # noqa: F401,F403
from .diagnostics import *  # noqa: F401,F403
from . import lattice, signals, windows, operators, tfr, gabor, zak, sampling, diagnostics, io

# ``tfrlab.bargmann`` is the transform itself; the module is ``sys.modules["tfrlab.bargmann"]``

__version__ = "0.1.0"
