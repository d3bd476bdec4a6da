"""Linear recovery operators built from point samples.

``interpolate_In`` is Dirichlet-kernel interpolation on 2n+1 uniform nodes,
``recover_Rn`` is the de la Vallee Poussin smoothing of a 4n-point discrete
convolution, and ``smolyak_Tn`` is the two-dimensional sparse-grid
combination of the univariate recovery differences.  Generic recovery rules
are carried by ``RecoveryPlan``: explicit sample points plus one stored
coefficient polynomial per point, so residuals stay computable on the
coefficient level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .kernels import dirichlet, vallee_poussin
from .polys import INF, BivariateTrigPoly, GridFunction, TrigPoly, from_samples, grid_nodes


@dataclass(frozen=True)
class RecoveryPlan:
    """Sample points xi^1..xi^m with coefficient functions psi_1..psi_m; the
    recovery rule is f -> sum_j f(xi^j) psi_j."""

    points: np.ndarray
    functions: tuple

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        fns = tuple(self.functions)
        if pts.ndim == 0:
            pts = pts.reshape(1)
        if len(fns) != (pts.shape[0] if pts.ndim >= 1 else 0):
            raise ValueError("need exactly one coefficient function per point")
        if pts.shape[0] > 1:
            flat = pts.reshape(pts.shape[0], -1)
            diffs = flat[:, None, :] - flat[None, :, :]
            close = np.all(np.abs(np.mod(diffs + np.pi, 2 * np.pi) - np.pi) < 1e-12, axis=-1)
            if np.any(close & ~np.eye(pts.shape[0], dtype=bool)):
                raise ValueError("recovery plan points must be distinct")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "functions", fns)

    @property
    def m(self) -> int:
        return self.points.shape[0]

    def max_degree(self) -> int:
        return max((f.degree for f in self.functions), default=0)

    def coeff_matrix(self, degree: int | None = None) -> np.ndarray:
        """(2N+1) x m matrix of the psi_j coefficients on a common band."""
        N = self.max_degree() if degree is None else degree
        out = np.zeros((2 * N + 1, self.m), dtype=np.complex128)
        for j, f in enumerate(self.functions):
            out[:, j] = f.pad(N).coeffs
        return out


def apply_plan(samples, plan: RecoveryPlan) -> TrigPoly:
    samples = np.asarray(samples, dtype=np.complex128)
    if samples.shape[0] != plan.m:
        raise ValueError(f"got {samples.shape[0]} samples for a plan with m={plan.m}")
    if plan.m == 0:
        return TrigPoly.zero(0)
    return TrigPoly(plan.coeff_matrix() @ samples)


def _uniform_samples(f, M: int) -> np.ndarray:
    """Values of f at 2*pi*j/M; TrigPoly inputs go through the FFT."""
    if isinstance(f, TrigPoly):
        return f.values_on_grid(M)
    if isinstance(f, GridFunction):
        if f.samples.ndim != 1 or f.samples.shape[0] != M:
            raise ValueError("grid function has the wrong grid")
        return np.asarray(f.samples)
    return np.asarray(f(grid_nodes(M)), dtype=np.complex128)


def interpolate_In(f, n: int) -> TrigPoly:
    """Degree-n interpolation at the 2n+1 uniform nodes: the unique element
    of the degree-n space matching f there."""
    if n < 0:
        raise ValueError("interpolation degree must be nonnegative")
    M = 2 * n + 1
    vals = _uniform_samples(f, M)
    chat = np.fft.fft(vals) / M
    return TrigPoly(chat[np.arange(-n, n + 1) % M])


def plan_interpolation(n: int) -> RecoveryPlan:
    """The interpolation rule as an explicit plan: psi_j = D_n(. - x^j)/(2n+1)."""
    M = 2 * n + 1
    pts = grid_nodes(M)
    d = dirichlet(n)
    return RecoveryPlan(pts, tuple((1.0 / M) * d.translate(x) for x in pts))


def recover_Rn(f, n: int) -> TrigPoly:
    """Discrete convolution with V_n over 4n uniform nodes; lands in the
    degree 2n-1 space and reproduces every polynomial of degree n."""
    if n < 1:
        raise ValueError("recovery order must be at least 1")
    return apply_plan(_uniform_samples(f, 4 * n), plan_vdlp(n))


def plan_vdlp(n: int) -> RecoveryPlan:
    """The V_n recovery rule as a plan: psi_j = V_n(. - x(j))/(4n) at the 4n
    uniform nodes."""
    M = 4 * n
    pts = grid_nodes(M)
    v = vallee_poussin(n)
    ks = np.arange(-v.degree, v.degree + 1)
    phases = np.exp(-1j * np.outer(pts, ks))
    return RecoveryPlan(pts, tuple(TrigPoly(v.coeffs * row / M) for row in phases))


@dataclass(frozen=True)
class MultiplierParams:
    """Order a >= 0 and phase alpha of the smoothing/roughening pair; n fixes
    the band 2n on which the roughening kernel is defined."""

    a: float
    alpha: float
    n: int = 0

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("multiplier order must be nonnegative")


def _multiplier_values(kind: str, a: float, alpha: float, ks: np.ndarray) -> np.ndarray:
    """Frequency response: k = 0 is fixed; positive and negative frequencies
    carry conjugate phases and the power |k|^(-a) (kind I) or |k|^(+a)
    (kind D)."""
    out = np.ones(ks.shape, dtype=np.complex128)
    pos, neg = ks > 0, ks < 0
    phase = np.exp(1j * alpha * np.pi / 2)
    absk = np.abs(ks).astype(float)
    if kind == "I":
        out[pos] = absk[pos] ** (-a) / phase
        out[neg] = absk[neg] ** (-a) * phase
    elif kind == "D":
        out[pos] = absk[pos] ** a * phase
        out[neg] = absk[neg] ** a / phase
    else:
        raise ValueError(f"multiplier kind must be 'I' or 'D', got {kind!r}")
    return out


def multiplier(kind: str, params: MultiplierParams, g: TrigPoly) -> TrigPoly:
    """Apply the smoothing (I) or roughening (D) multiplier coefficientwise.
    The D direction only acts on the band it is defined for: deg(g) <= 2n."""
    if kind == "D" and g.degree > 2 * params.n:
        raise ValueError(
            f"roughening multiplier is defined on degree <= {2 * params.n}, got {g.degree}")
    ks = np.arange(-g.degree, g.degree + 1)
    return TrigPoly(g.coeffs * _multiplier_values(kind, params.a, params.alpha, ks))


def multiplier_biv(kind: str, params: MultiplierParams, F: BivariateTrigPoly,
                   axis: int) -> BivariateTrigPoly:
    """Same multiplier acting on one variable of a bivariate polynomial."""
    N = F.degrees[axis]
    if kind == "D" and N > 2 * params.n:
        raise ValueError(
            f"roughening multiplier is defined on degree <= {2 * params.n}, got {N}")
    vals = _multiplier_values(kind, params.a, params.alpha, np.arange(-N, N + 1))
    C = F.coeffs * (vals[:, None] if axis == 0 else vals[None, :])
    return BivariateTrigPoly(C)


# ---------------------------------------------------------------------------
# Smolyak sparse-grid recovery, d = 2


class TensorSampler:
    """Separable function u(x) v(y); uniform grids are sampled by FFT."""

    def __init__(self, u: TrigPoly, v: TrigPoly):
        self.u, self.v = u, v

    def sample_grid(self, M1: int, M2: int) -> np.ndarray:
        return np.outer(self.u.values_on_grid(M1), self.v.values_on_grid(M2))


class PolySampler:
    def __init__(self, F: BivariateTrigPoly):
        self.F = F

    def sample_grid(self, M1: int, M2: int) -> np.ndarray:
        return self.F.values_on_grid(M1, M2)


class CallableSampler:
    """Wraps f(x, y); every distinct node is evaluated exactly once, keyed by
    its reduced fraction of the circle."""

    def __init__(self, fn):
        self.fn = fn
        self.cache: dict = {}

    @staticmethod
    def _keys(M: int) -> list:
        return [(j // math.gcd(j, M) if j else 0, M // math.gcd(j, M) if j else 1)
                for j in range(M)]

    def sample_grid(self, M1: int, M2: int) -> np.ndarray:
        k1, k2 = self._keys(M1), self._keys(M2)
        x, y = grid_nodes(M1), grid_nodes(M2)
        out = np.empty((M1, M2), dtype=np.complex128)
        new_i, new_j = [], []
        for i in range(M1):
            for j in range(M2):
                key = (k1[i], k2[j])
                val = self.cache.get(key)
                if val is None:
                    new_i.append(i)
                    new_j.append(j)
                else:
                    out[i, j] = val
        if new_i:
            vals = np.asarray(self.fn(x[new_i], y[new_j]), dtype=np.complex128)
            for t, (i, j) in enumerate(zip(new_i, new_j)):
                self.cache[(k1[i], k2[j])] = vals[t]
                out[i, j] = vals[t]
        return out

    @property
    def points_seen(self) -> int:
        return len(self.cache)


def as_bivariate_sampler(f):
    if hasattr(f, "sample_grid"):
        return f
    if isinstance(f, BivariateTrigPoly):
        return PolySampler(f)
    if callable(f):
        return CallableSampler(f)
    raise TypeError("cannot sample this object on tensor grids")


def _tensor_vdlp_coeffs(sampler, a: int, b: int) -> np.ndarray:
    """Coefficients of (R_a x R_b) f from f's values on the 4a x 4b grid."""
    M1, M2 = 4 * a, 4 * b
    vals = sampler.sample_grid(M1, M2)
    chat = np.fft.fft2(vals) / (M1 * M2)
    n1, n2 = 2 * a - 1, 2 * b - 1
    C = chat[np.ix_(np.arange(-n1, n1 + 1) % M1, np.arange(-n2, n2 + 1) % M2)]
    va = vallee_poussin(a).coeffs
    vb = vallee_poussin(b).coeffs
    return C * np.outer(va, vb)


def smolyak_sample_count(n: int) -> int:
    """Distinct sample points used at level n: the grids are nested, so a
    node pair with refinement levels (u1, u2) is fresh exactly when
    u1 + u2 <= n."""
    def nu(u: int) -> int:
        return 4 if u == 0 else 2 ** (u + 1)
    return sum(nu(u1) * nu(u2) for u1 in range(n + 1) for u2 in range(n + 1 - u1))


@dataclass(frozen=True)
class SmolyakResult:
    poly: BivariateTrigPoly
    n_samples: int
    level: int
    blocks: tuple = field(default=(), compare=False)


def smolyak_Tn(f, n: int) -> SmolyakResult:
    """Level-n sparse-grid recovery: sum of mixed differences of the
    univariate rules over levels with s1 + s2 <= n.  Uses roughly 2^n * n
    samples instead of the 2^(2n) of the full tensor grid."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    sampler = as_bivariate_sampler(f)
    deg = 2 * 2 ** n - 1
    acc = np.zeros((2 * deg + 1, 2 * deg + 1), dtype=np.complex128)
    blocks = []

    def add(C: np.ndarray, sign: float):
        n1 = (C.shape[0] - 1) // 2
        n2 = (C.shape[1] - 1) // 2
        acc[deg - n1:deg + n1 + 1, deg - n2:deg + n2 + 1] += sign * C

    for s1 in range(n + 1):
        for s2 in range(n + 1 - s1):
            blocks.append((s1, s2))
            # Delta_s = (R_{2^s1} - R_{2^s1/2}) x (R_{2^s2} - R_{2^s2/2}),
            # with the level below 0 taken as the zero operator.
            for a, sa in (((2 ** s1), 1.0),) + ((((2 ** (s1 - 1)), -1.0),) if s1 else ()):
                for b, sb in (((2 ** s2), 1.0),) + ((((2 ** (s2 - 1)), -1.0),) if s2 else ()):
                    add(_tensor_vdlp_coeffs(sampler, a, b), sa * sb)

    count = smolyak_sample_count(n)
    if isinstance(sampler, CallableSampler):
        count = sampler.points_seen
    return SmolyakResult(BivariateTrigPoly(acc), count, n, tuple(blocks))
