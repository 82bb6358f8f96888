"""Exact positivity certificates (Handelman, Krivine-Stengle, lifting) with rational arithmetic.

Rationals are exchanged as ``fractions.Fraction``; reports are plain dicts parsed
from the library's canonical JSON.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from . import _core
from ._core import GeneratorSystem, ParseError, Polynomial

__all__ = [
    "GeneratorSystem",
    "ParseError",
    "Polynomial",
    "certify",
    "degree_bounds",
    "evaluate",
    "lp_lower_bound",
    "norm1_minus_f",
    "run_cli",
    "verify",
    "violations",
]

RationalLike = Union[int, str, Fraction]


def _q(x: RationalLike) -> str:
    return str(Fraction(x))


def _point(xs: Iterable[RationalLike]) -> list:
    return [_q(x) for x in xs]


def evaluate(p: Polynomial, point: Sequence[RationalLike]) -> Fraction:
    """Exact value of ``p`` at a rational point."""
    return Fraction(p.eval(_point(point)))


def verify(cert: Union[dict, str], target: Polynomial, base_dir: str = "") -> dict:
    """Checks a certificate (dict or JSON text) against ``target``."""
    text = cert if isinstance(cert, str) else json.dumps(cert)
    return json.loads(_core.verify(text, target, base_dir))


def certify(
    method: str,
    f: Polynomial,
    sys: Optional[GeneratorSystem] = None,
    r_min: int = 0,
    r_max: int = 8,
    lifting: Optional[str] = None,
) -> dict:
    """Ladder search for a certificate; ``method`` is handelman, krivine, ext-handelman or lift."""
    if sys is None:
        sys = GeneratorSystem(f.nvars, [])
    return json.loads(_core.certify(method, f, sys, r_min, r_max, lifting))


def norm1_minus_f(f: Polynomial, cone: str = "R") -> dict:
    """Certificate of ``||f||_1 - f`` in the R, Q or T cone of the box."""
    return json.loads(_core.norm1_minus_f(f, cone))


def lp_lower_bound(
    p: Polynomial,
    sys: Optional[GeneratorSystem] = None,
    method: str = "handelman",
    r: int = 2,
    tol: RationalLike = Fraction(1, 1 << 20),
) -> Fraction:
    """Certified lower bound of ``p`` from the degree-``r`` cone."""
    if sys is None:
        sys = GeneratorSystem(p.nvars, [])
    return Fraction(_core.lp_lower_bound(p, sys, method, r, _q(tol)))


def degree_bounds(**inputs) -> dict:
    """Degree-bound formulas for the given inputs (n, m, d, d_g, kappa, L_g, c_g, f_min)."""
    payload = {k: (v if isinstance(v, int) and k in ("n", "m", "d", "d_g") else _q(v)) for k, v in inputs.items()}
    return json.loads(_core.degree_bounds(json.dumps(payload)))


def violations(sys: GeneratorSystem, point: Sequence[RationalLike]) -> tuple:
    """The violation measures (G, H) at ``point``."""
    g, h = _core.violations(sys, _point(point))
    return Fraction(g), Fraction(h)


def run_cli(*args: str) -> tuple:
    """Runs the command-line interface in-process; returns (exit_code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
