"""Deterministic text rendering: 15 significant digits, no negative zeros, optional pi multiples."""
from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any, Optional

SIG_DIGITS = 15
PI_TOL = 1e-9
PI_MAX_DEN = 420


def fmt15(x: float) -> str:
    x = float(x)
    if x == 0.0:
        return "0"
    return f"{x:.{SIG_DIGITS}g}"


def pi_multiple(x: float, tol: float = PI_TOL, max_den: int = PI_MAX_DEN) -> Optional[Fraction]:
    """``p/q`` with ``|x - p pi / q| <= tol`` and ``q <= max_den``, else None."""
    r = Fraction(float(x) / math.pi).limit_denominator(max_den)
    if abs(float(x) - float(r) * math.pi) <= tol:
        return r
    return None


def fmt_angle(x: float, as_pi: bool = False) -> str:
    if as_pi:
        r = pi_multiple(x)
        if r is not None:
            if r == 0:
                return "0"
            num = {1: "", -1: "-"}.get(r.numerator, f"{r.numerator}*")
            return f"{num}pi" + (f"/{r.denominator}" if r.denominator != 1 else "")
    return fmt15(x)


def clean(obj: Any) -> Any:
    """Round floats to 15 significant digits for byte-stable JSON; complex becomes ``[re, im]``."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, complex):
        return [clean(obj.real), clean(obj.imag)]
    if hasattr(obj, "ndim") and obj.ndim > 0:
        return clean(obj.tolist())
    if isinstance(obj, float) or hasattr(obj, "dtype"):
        val = obj.item() if hasattr(obj, "item") else obj
        if isinstance(val, complex):
            return clean(val)
        if isinstance(val, (bool, int)):
            return val
        if not math.isfinite(val):
            return None
        r = float(fmt15(val))
        return 0.0 if r == 0 else r
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if hasattr(obj, "tolist"):
        return clean(obj.tolist())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(clean(obj), indent=2) + "\n"
