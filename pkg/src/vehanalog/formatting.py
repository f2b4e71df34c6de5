"""Number formatting shared by every text output."""

import math

SIG_DIGITS = 6


def fmt(x: float, digits: int = SIG_DIGITS) -> str:
    """``digits`` significant figures; scientific below 1e-3 or from 1e6 up."""
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return str(x)
    if x == 0:
        return "0"
    ax = abs(x)
    if ax < 1e-3 or ax >= 1e6:
        return f"{x:.{digits - 1}e}"
    decimals = max(digits - 1 - math.floor(math.log10(ax)), 0)
    s = f"{x:.{decimals}f}"
    # rounding can carry into a new digit (999999.5 -> 1000000)
    if abs(float(s)) >= 1e6:
        return f"{x:.{digits - 1}e}"
    return s


def fmt_complex(z: complex, digits: int = SIG_DIGITS) -> str:
    z = complex(z)
    sign = "-" if z.imag < 0 or (z.imag == 0 and math.copysign(1, z.imag) < 0) else "+"
    return f"{fmt(z.real, digits)}{sign}{fmt(abs(z.imag), digits)}j"
