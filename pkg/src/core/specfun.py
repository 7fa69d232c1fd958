"""
Regular operator monotone functions and the means they generate.

The catalog is closed: the Wigner-Yanase function ``wy``, the symmetric
logarithmic derivative function ``sld`` and the Wigner-Yanase-Dyson family
``wyd:<alpha>``. Each function f is normalized (f(1) = 1), symmetric
(f(t) = t f(1/t)) and regular (f(0) > 0). Its mean is m^f(x, y) = x f(y/x)
and its non-regular partner is

    f~(t) = ((t + 1) - (t - 1)^2 f(0) / f(t)) / 2.

All evaluators accept scalars or numpy arrays and return the same kind.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError

logger = logging.getLogger(__name__)

WY = "wy"
SLD = "sld"
WYD = "wyd-alpha"

CATALOG_NAMES = (WY, SLD, WYD)

ALPHA_MIN = 1e-3
ALPHA_MAX = 1 - 1e-3

# Half-width of the window around t = 1 where the WYD formula is replaced by
# interpolation through f(1 - SINGULAR_WINDOW), f(1) = 1, f(1 + SINGULAR_WINDOW).
SINGULAR_WINDOW = 1e-4


@dataclass(frozen=True)
class MonotoneFunctionSpec:
    """A regular member f of the catalog, addressed by name (and alpha)."""

    name: str
    alpha: Optional[float] = None

    def __post_init__(self):
        if self.name not in CATALOG_NAMES:
            raise DomainError(f"Unknown monotone function '{self.name}', expected one of {CATALOG_NAMES}")
        if self.name == WYD:
            if self.alpha is None:
                raise DomainError("wyd-alpha requires an alpha parameter")
            alpha = float(self.alpha)
            if not np.isfinite(alpha) or not ALPHA_MIN <= alpha <= ALPHA_MAX:
                raise DomainError(f"alpha must lie in [{ALPHA_MIN:g}, {ALPHA_MAX:g}], got {self.alpha}")
            object.__setattr__(self, 'alpha', alpha)
        elif self.alpha is not None:
            raise DomainError(f"'{self.name}' takes no alpha parameter")

    @property
    def f_zero(self):
        """The value f(0) > 0."""
        if self.name == WY:
            return 0.25
        if self.name == SLD:
            return 0.5
        return self.alpha * (1 - self.alpha)

    @property
    def identifier(self):
        """String form accepted by :func:`parse_spec`."""
        if self.name == WYD:
            return f"wyd:{self.alpha!r}"
        return self.name

    def __str__(self):
        return self.identifier

    def f(self, t):
        return eval_f(self, t)

    def mean(self, x, y):
        return eval_mean(self, x, y)

    def tilde(self, t):
        return eval_tilde(self, t)

    def tilde_mean(self, x, y):
        return eval_tilde_mean(self, x, y)


def parse_spec(identifier):
    """Build a spec from "wy", "sld" or "wyd:<alpha>"."""
    if isinstance(identifier, MonotoneFunctionSpec):
        return identifier
    text = str(identifier).strip().lower()
    if text in (WY, SLD):
        return MonotoneFunctionSpec(text)
    if text.startswith("wyd:"):
        try:
            alpha = float(text[4:])
        except ValueError:
            raise DomainError(f"Invalid alpha in '{identifier}'") from None
        return MonotoneFunctionSpec(WYD, alpha)
    raise DomainError(f"Unknown function identifier '{identifier}', expected wy, sld or wyd:<alpha>")


def catalog():
    """Default set of functions exercised by the selftest and listed by the CLI."""
    return (
        MonotoneFunctionSpec(WY),
        MonotoneFunctionSpec(SLD),
        MonotoneFunctionSpec(WYD, 0.25),
        MonotoneFunctionSpec(WYD, 0.75),
    )


def _nonnegative(value, what):
    array = np.asarray(value, dtype=float)
    if np.any(np.isnan(array)) or np.any(array < 0):
        raise DomainError(f"{what} must be non-negative, got {value}")
    return array


def _result(array, like):
    return float(array) if np.ndim(like) == 0 else array


def _wyd_formula(alpha, t):
    # t > 0, t != 1; log1p/expm1 keep both factors accurate close to t = 1
    log_t = np.log1p(t - 1)
    return alpha * (1 - alpha) * (t - 1) ** 2 / (np.expm1(alpha * log_t) * np.expm1((1 - alpha) * log_t))


def _wyd(alpha, t):
    out = np.empty_like(t)
    zero = t == 0
    near = np.abs(t - 1) < SINGULAR_WINDOW
    regular = ~(zero | near)

    out[zero] = alpha * (1 - alpha)
    out[regular] = _wyd_formula(alpha, t[regular])
    if np.any(near):
        lower, upper = _wyd_formula(alpha, np.array([1 - SINGULAR_WINDOW, 1 + SINGULAR_WINDOW]))
        slope = (upper - lower) / (2 * SINGULAR_WINDOW)
        curvature = (upper + lower - 2) / (2 * SINGULAR_WINDOW ** 2)
        u = t[near] - 1
        out[near] = 1 + slope * u + curvature * u ** 2
    return out


def _f(spec, t):
    if spec.name == WY:
        return (np.sqrt(t) + 1) ** 2 / 4
    if spec.name == SLD:
        return (t + 1) / 2
    return _wyd(spec.alpha, t)


def _tilde(spec, t):
    return ((t + 1) - (t - 1) ** 2 * spec.f_zero / _f(spec, t)) / 2


def _homogeneous(spec, x, y, generator):
    # M g(m/M) with M = max(x, y) equals x g(y/x) for symmetric g; the ratio
    # stays in [0, 1] and the result is exactly symmetric.
    big = np.maximum(x, y)
    small = np.minimum(x, y)
    positive = big > 0
    ratio = np.divide(small, big, out=np.zeros_like(big), where=positive)
    return np.where(positive, big * generator(spec, ratio), 0.0)


def eval_f(spec, t):
    """f(t) for t >= 0."""
    array = np.atleast_1d(_nonnegative(t, "t"))
    return _result(_f(spec, array).reshape(np.shape(t)), t)


def eval_mean(spec, x, y):
    """m^f(x, y) = x f(y/x) with m^f(x, 0) = x f(0) and m^f(0, 0) = 0."""
    xs, ys = np.broadcast_arrays(_nonnegative(x, "x"), _nonnegative(y, "y"))
    value = _homogeneous(spec, np.atleast_1d(xs), np.atleast_1d(ys), _f)
    return _result(value.reshape(xs.shape), xs)


def eval_tilde(spec, t):
    """f~(t), the non-regular partner of f; f~(0) = 0 and f~(1) = 1."""
    array = np.atleast_1d(_nonnegative(t, "t"))
    return _result(_tilde(spec, array).reshape(np.shape(t)), t)


def eval_tilde_mean(spec, x, y):
    """m^{f~}(x, y) = x f~(y/x), vanishing whenever one argument is 0."""
    xs, ys = np.broadcast_arrays(_nonnegative(x, "x"), _nonnegative(y, "y"))
    value = _homogeneous(spec, np.atleast_1d(xs), np.atleast_1d(ys), _tilde)
    return _result(value.reshape(xs.shape), xs)


def arithmetic_mean(x, y):
    return (np.asarray(x, dtype=float) + np.asarray(y, dtype=float)) / 2


def harmonic_mean(x, y):
    """2 / (1/x + 1/y) for positive arguments."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return 2 * x * y / (x + y)


def tilde_dominates(f, g, grid, tol=1e-12):
    """True when m^{f~}(x, y) >= m^{g~}(x, y) on every pair of the positive grid.

    This is the hypothesis under which Q^f <= Q^g for every state.
    """
    values = _nonnegative(grid, "grid")
    xs, ys = np.meshgrid(values, values)
    gap = eval_tilde_mean(f, xs, ys) - eval_tilde_mean(g, xs, ys)
    scale = np.maximum(arithmetic_mean(xs, ys), 1.0)
    return bool(np.all(gap >= -tol * scale))
