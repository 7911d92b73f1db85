import math
import numbers

from .errors import ParameterError


def check_probability(p, name="p", *, open_low=False, open_high=False):
    if isinstance(p, bool) or not isinstance(p, numbers.Real) or math.isnan(p):
        raise ParameterError(f"{name} must be a real number, got {p!r}")
    p = float(p)
    lo_ok = p > 0.0 if open_low else p >= 0.0
    hi_ok = p < 1.0 if open_high else p <= 1.0
    if not (lo_ok and hi_ok):
        lo = "(" if open_low else "["
        hi = ")" if open_high else "]"
        raise ParameterError(f"{name} must lie in {lo}0, 1{hi}, got {p}")
    return p


def check_count(n, name="n", *, minimum=0):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise ParameterError(f"{name} must be an integer, got {n!r}")
    n = int(n)
    if n < minimum:
        raise ParameterError(f"{name} must be >= {minimum}, got {n}")
    return n


def check_positive(x, name):
    if isinstance(x, bool) or not isinstance(x, numbers.Real) or not x > 0:
        raise ParameterError(f"{name} must be > 0, got {x!r}")
    return float(x)


def check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral):
        raise ParameterError(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed < 2**64:
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return int(seed)
