"""Real-argument gamma-function kernels.

Self-contained Lanczos evaluation so results are reproducible bit for bit,
independent of the platform libm.
"""

import math

from .errors import DomainError

# Lanczos approximation, g = 671/128, 14-term rational coefficient set
# (Press, Teukolsky, Vetterling, Flannery, "Numerical Recipes", 3rd ed.,
# section 6.1).  Accurate to ~1e-15 relative in gamma over the positive axis.
_LANCZOS_G = 5.24218750000000000
_LANCZOS_SER0 = 0.999999999999997092
_LANCZOS_COF = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_SQRT_2PI = 2.5066282746310005


def ln_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not (x > 0.0):
        raise DomainError(f"ln_gamma requires x > 0, got {x!r}")
    tmp = x + _LANCZOS_G
    tmp = (x + 0.5) * math.log(tmp) - tmp
    ser = _LANCZOS_SER0
    y = x
    for c in _LANCZOS_COF:
        y += 1.0
        ser += c / y
    return tmp + math.log(_SQRT_2PI * ser / x)


def gamma_ratio(a: float, b: float) -> float:
    """Gamma(a)/Gamma(b) through the log domain, safe against overflow."""
    if not (a > 0.0):
        raise DomainError(f"gamma_ratio requires a > 0, got {a!r}")
    if not (b > 0.0):
        raise DomainError(f"gamma_ratio requires b > 0, got {b!r}")
    return math.exp(ln_gamma(a) - ln_gamma(b))
