"""Rate-law exponents and log-log slope fitting.

Each supported law carries the exponent of the main parameter (m, a grid
cardinality, or 2^n) in the corresponding asymptotic error statement,
together with its hypothesis ranges; out-of-range parameters are rejected
with the violated condition named.  Fits are ordinary least squares in
log-log coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .polys import INF, check_exponent

LAW_IDS = ("InT1", "InT2", "InT3", "InT4", "InT4a", "InT4b", "InT5",
           "univarR", "Smolyak", "LbT1", "qpL1")


def _inv(p: float) -> float:
    return 0.0 if p == INF else 1.0 / p


def xi(q, p) -> float:
    """(1/q - max(1/2, 1/p))_+ : the exponent correction that governs both
    width and separable-product rates."""
    q, p = check_exponent(q), check_exponent(p)
    return max(_inv(q) - max(0.5, _inv(p)), 0.0)


def r_floor_q(q1, q2):
    """Smallest admissible smoothness vector for the mixed classes with
    integrability (q1, q2)."""
    q1, q2 = check_exponent(q1), check_exponent(q2)
    if q1 >= 2:
        return (_inv(q1), _inv(q2))
    return (_inv(q1), max(0.5, _inv(q2)))


def r_floor_qp(q, p):
    """Smoothness floor depending on both integrability vectors; three
    regimes split at p1 = 2."""
    q1, q2 = check_exponent(q[0]), check_exponent(q[1])
    p1, p2 = check_exponent(p[0]), check_exponent(p[1])
    if not q1 <= p1:
        raise ValueError(f"needs q1 <= p1, got q1={q1}, p1={p1}")
    if p1 <= 2:
        return (_inv(q1) - _inv(p1), max(_inv(q2) - _inv(p2), 0.0))
    if q1 >= 2:
        return (_inv(q1), _inv(q2))
    return (_inv(q1), max(0.5, _inv(q2)))


def _pair(v):
    if np.iterable(v):
        t = tuple(float(x) for x in v)
        if len(t) != 2:
            raise ValueError(f"need a pair, got {v!r}")
        return t
    raise ValueError(f"need a pair, got {v!r}")


@dataclass(frozen=True)
class RateLaw:
    """A named rate statement with its parameters.

    law: one of LAW_IDS.  r is the smoothness (scalar for univarR, pair
    otherwise); q/p are the class and target exponents (scalars or pairs as
    each law requires).
    """

    law: str
    r: object = None
    q: object = None
    p: object = None

    def __post_init__(self):
        if self.law not in LAW_IDS:
            raise ValueError(f"unknown rate law {self.law!r}; known: {LAW_IDS}")


def _require(cond: bool, msg: str):
    if not cond:
        raise ValueError(f"out of hypothesis: {msg}")


def predicted_exponent(law: RateLaw) -> float:
    """Exponent of the driving parameter in the named rate statement.

    For Smolyak the driving parameter is 2^n (the reported value is -r and
    the remaining n^(d-1) factor is checked separately); for qpL1 it is the
    band cardinality; everywhere else it is the sample/term count m.
    """
    t = law.law
    if t == "univarR":
        r = float(law.r)
        q, p = check_exponent(law.q), check_exponent(law.p)
        _require(r > _inv(q), f"univarR needs r > 1/q, got r={r}, 1/q={_inv(q)}")
        return -r + max(_inv(q) - _inv(p), 0.0)

    if t == "Smolyak":
        r = float(law.r)
        _require(r > 0, "Smolyak needs r > 0")
        return -r

    if t == "qpL1":
        q, p = check_exponent(law.q), check_exponent(law.p)
        _require(q <= p, f"qpL1 needs q <= p, got q={q}, p={p}")
        return _inv(q) - _inv(p)

    if t in ("InT1", "InT2"):
        r1, r2 = _pair(law.r)
        q, p = check_exponent(law.q), check_exponent(law.p)
        if t == "InT1":
            _require(r1 > 1 and r2 > 1 + max(0.5, _inv(q)),
                     f"InT1 needs r > (1, 1 + max(1/2, 1/q)), got r=({r1},{r2})")
            return -(r1 + r2) + xi(q, p)
        _require(1 <= q <= 2 <= p, f"InT2 needs 1 <= q <= 2 <= p, got q={q}, p={p}")
        _require(r1 > 1 and r2 > 1 + _inv(q),
                 f"InT2 needs r > (1, 1 + 1/q), got r=({r1},{r2})")
        return -(r1 + r2) + _inv(q) - _inv(p)

    if t in ("InT3", "InT4"):
        r1, r2 = _pair(law.r)
        q1, q2 = _pair(law.q)
        floor = r_floor_q(q1, q2)
        _require(r1 > floor[0] and r2 > floor[1],
                 f"needs r > {floor}, got r=({r1},{r2})")
        if t == "InT3":
            p = check_exponent(law.p)
            _require(p >= 2, f"InT3 needs 2 <= p, got p={p}")
            return -(r1 + r2) + max(_inv(q1) - 0.5, 0.0) + 0.5 - _inv(p)
        return -(r1 + r2) + max(_inv(q1) - 0.5, 0.0) + 0.5

    if t == "InT4a":
        r1, r2 = _pair(law.r)
        q1, q2 = _pair(law.q)
        p1, p2 = _pair(law.p)
        floor = r_floor_q(q1, q2)
        _require(r1 > floor[0] and r2 > floor[1],
                 f"InT4a needs r > {floor}, got r=({r1},{r2})")
        return -(r1 + r2) + _inv(q1) - _inv(check_exponent(p1)) - _inv(check_exponent(p2))

    if t == "InT4b":
        r1, r2 = _pair(law.r)
        q1, q2 = _pair(law.q)
        _require(1 <= q1 <= 2, f"InT4b needs 1 <= q1 <= 2, got q1={q1}")
        floor = r_floor_q(q1, q2)
        _require(r1 > floor[0] and r2 > floor[1],
                 f"InT4b needs r > {floor}, got r=({r1},{r2})")
        return -(r1 + r2) + _inv(q1)

    if t == "InT5":
        r1, r2 = _pair(law.r)
        q1, q2 = _pair(law.q)
        p1, p2 = _pair(law.p)
        _require(r1 > 1 and r2 > 1, f"InT5 needs r > (1,1), got r=({r1},{r2})")
        _require(check_exponent(q1) <= check_exponent(p1),
                 f"InT5 needs q1 <= p1, got q1={q1}, p1={p1}")
        return -(r1 + r2) + xi(q1, p1)

    if t == "LbT1":
        r1, r2 = _pair(law.r)
        q1, q2 = _pair(law.q)
        # law.p holds the recovery pair (q, p)
        q, p = _pair(law.p)
        q, p = check_exponent(q), check_exponent(p)
        _require(q <= p, f"LbT1 needs q <= p, got q={q}, p={p}")
        _require(r1 > _inv(q1) and r2 > _inv(q2),
                 f"LbT1 needs r > (1/q1, 1/q2), got r=({r1},{r2})")
        return -(r1 + r2) - 1.0 + _inv(q1) + _inv(q) - _inv(p)

    raise AssertionError(t)


def rate_fit(series) -> tuple[float, float]:
    """Least squares slope of log(error) against log(m), with the standard
    error of the slope; needs at least 4 strictly positive errors."""
    ms = np.asarray([s[0] for s in series], dtype=float)
    errs = np.asarray([s[1] for s in series], dtype=float)
    if ms.size < 4:
        raise ValueError(f"insufficient points: need at least 4, got {ms.size}")
    if np.any(errs <= 0):
        raise ValueError("errors must be strictly positive for a log-log fit")
    if np.any(np.diff(ms) <= 0):
        raise ValueError("the m-series must be strictly increasing")
    x, y = np.log(ms), np.log(errs)
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    resid = y - (ym + slope * (x - xm))
    dof = max(ms.size - 2, 1)
    stderr = float(np.sqrt(np.sum(resid ** 2) / dof / sxx))
    return slope, stderr


@dataclass(frozen=True)
class RateReport:
    """Measured (m, error) series with the fitted slope and the verdict
    against a predicted exponent."""

    series: tuple
    slope: float
    stderr: float
    predicted: float
    tolerance: float
    verdict: bool
    environment: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_series(cls, series, predicted: float, tolerance: float,
                    environment: dict | None = None,
                    verdict: bool | None = None) -> "RateReport":
        slope, stderr = rate_fit(series)
        if verdict is None:
            verdict = abs(slope - predicted) <= tolerance
        return cls(tuple((int(m), float(e)) for m, e in series), slope, stderr,
                   float(predicted), float(tolerance), bool(verdict),
                   dict(environment or {}))

    def csv(self) -> str:
        lines = [f"# {k}={v}" for k, v in sorted(self.environment.items())]
        lines.append("m,error,log2_m,log2_error")
        for m, e in self.series:
            lines.append(f"{m},{e:.12e},{math.log2(m):.12f},{math.log2(e):.12f}")
        lines.append(
            f"summary,slope={self.slope:.6f},stderr={self.stderr:.6f},"
            f"predicted={self.predicted:.6f},verdict={'pass' if self.verdict else 'fail'}")
        return "\n".join(lines) + "\n"

    def write_csv(self, path):
        with open(path, "w") as fh:
            fh.write(self.csv())
