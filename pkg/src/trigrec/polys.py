"""Trigonometric polynomials on the torus with exact complex coefficients.

A univariate polynomial of degree N stores c_k for k = -N..N in a dense
length 2N+1 array (index i <-> k = i - N); a bivariate one stores the
matrix c_{k,l}.  Every norm here is taken in the normalized measure
dx/(2*pi), so constants have norm 1 for every exponent and Parseval reads
||f||_2^2 = sum |c_k|^2.

The sup norm marker is ``INF`` (``math.inf``); it is never approximated by
a large finite exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

INF = math.inf

_EVAL_CHUNK = 512
_NORM_BATCH = 256


def check_exponent(p) -> float:
    p = float(p)
    if p != INF and p < 1.0:
        raise ValueError(f"exponent must lie in [1, inf], got {p}")
    return p


def dual_exponent(q) -> float:
    """q' = q/(q-1) with the conventions 1' = inf and inf' = 1."""
    q = check_exponent(q)
    if q == INF:
        return 1.0
    if q == 1.0:
        return INF
    return q / (q - 1.0)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.flags.writeable = False
    return a


def _wrap_last(c: np.ndarray, M: int) -> np.ndarray:
    """Fold coefficients c_k (k = -N..N along the last axis) into DFT bins
    k mod M.  Frequencies that collide add up, which reproduces exactly the
    aliasing of a length-M uniform grid."""
    L = c.shape[-1]
    N = (L - 1) // 2
    if M >= L:
        out = np.zeros(c.shape[:-1] + (M,), dtype=np.complex128)
        out[..., :N + 1] = c[..., N:]
        if N:
            out[..., M - N:] = c[..., :N]
        return out
    scatter = np.zeros((L, M))
    scatter[np.arange(L), np.arange(-N, N + 1) % M] = 1.0
    return c @ scatter


def _wrap_axis(c: np.ndarray, M: int, axis: int) -> np.ndarray:
    moved = np.moveaxis(c, axis, -1)
    return np.moveaxis(_wrap_last(moved, M), -1, axis)


def grid_nodes(M: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(M) / M


def fast_grid_size(n: int) -> int:
    """Smallest 7-smooth integer >= n; FFT grids are padded to such sizes,
    which only refines the quadrature."""
    n = int(n)
    if n <= 8:
        return max(n, 1)
    best = 1 << (n - 1).bit_length()
    p7 = 1
    while p7 < best:
        p5 = p7
        while p5 < best:
            p3 = p5
            while p3 < best:
                m = p3
                while m < n:
                    m *= 2
                best = min(best, m)
                p3 *= 3
            p5 *= 5
        p7 *= 7
    return best


def norm_grid_size(degree: int, oversample: int) -> int:
    """Actual node count used by the L_p norms at this degree."""
    return fast_grid_size(oversample * (2 * degree + 1))


@dataclass(frozen=True)
class TrigPoly:
    """f(x) = sum_{|k| <= N} c_k e^{ikx}, immutable after construction."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.ndim != 1 or c.size % 2 == 0:
            raise ValueError("need a 1-d coefficient array of odd length")
        object.__setattr__(self, "coeffs", _freeze(c))

    @property
    def degree(self) -> int:
        return (self.coeffs.size - 1) // 2

    @classmethod
    def zero(cls, degree: int = 0) -> "TrigPoly":
        return cls(np.zeros(2 * degree + 1, dtype=np.complex128))

    @classmethod
    def constant(cls, value) -> "TrigPoly":
        return cls(np.array([value], dtype=np.complex128))

    @classmethod
    def exponential(cls, k: int) -> "TrigPoly":
        """e^{ikx}."""
        n = abs(int(k))
        c = np.zeros(2 * n + 1, dtype=np.complex128)
        c[n + k] = 1.0
        return cls(c)

    @classmethod
    def cosine(cls, k: int = 1) -> "TrigPoly":
        c = np.zeros(2 * k + 1, dtype=np.complex128)
        c[0] = c[-1] = 0.5
        return cls(c)

    def c(self, k: int) -> complex:
        """Coefficient at frequency k (0 outside the stored band)."""
        if abs(k) > self.degree:
            return 0.0 + 0.0j
        return complex(self.coeffs[self.degree + k])

    @property
    def is_real(self) -> bool:
        flipped = np.conj(self.coeffs[::-1])
        scale = max(1.0, float(np.abs(self.coeffs).max(initial=0.0)))
        return bool(np.abs(self.coeffs - flipped).max(initial=0.0) <= 1e-14 * scale)

    def pad(self, degree: int) -> "TrigPoly":
        if degree < self.degree:
            raise ValueError("cannot pad below the current degree")
        if degree == self.degree:
            return self
        extra = degree - self.degree
        return TrigPoly(np.pad(self.coeffs, (extra, extra)))

    def translate(self, y: float) -> "TrigPoly":
        """f(x - y)."""
        ks = np.arange(-self.degree, self.degree + 1)
        return TrigPoly(self.coeffs * np.exp(-1j * ks * y))

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        n = max(self.degree, other.degree)
        return TrigPoly(self.pad(n).coeffs + other.pad(n).coeffs)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        n = max(self.degree, other.degree)
        return TrigPoly(self.pad(n).coeffs - other.pad(n).coeffs)

    def __mul__(self, scalar) -> "TrigPoly":
        return TrigPoly(self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "TrigPoly":
        return TrigPoly(-self.coeffs)

    def eval(self, x):
        """Direct summation sum_k c_k e^{ikx}; x may be a scalar or array."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        ks = np.arange(-self.degree, self.degree + 1)
        out = np.empty(xs.shape, dtype=np.complex128)
        flat = xs.ravel()
        res = out.ravel()
        for lo in range(0, flat.size, _EVAL_CHUNK):
            chunk = flat[lo:lo + _EVAL_CHUNK]
            res[lo:lo + _EVAL_CHUNK] = np.exp(1j * np.outer(chunk, ks)) @ self.coeffs
        if np.isscalar(x) or np.asarray(x).ndim == 0:
            return complex(out.ravel()[0])
        return out

    def values_on_grid(self, M: int) -> np.ndarray:
        """Values at the uniform nodes 2*pi*j/M, j = 0..M-1 (aliased when
        M < 2N+1, exact otherwise)."""
        return np.fft.ifft(_wrap_last(self.coeffs, M)) * M


@dataclass(frozen=True)
class GridFunction:
    """Samples at the uniform nodes 2*pi*j/M (or the M1 x M2 tensor grid).

    ``source_degree`` remembers the band of the polynomial the samples came
    from, so an undersized reconstruction can be refused.
    """

    samples: np.ndarray
    source_degree: tuple | int | None = None

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim not in (1, 2):
            raise ValueError("samples must be 1-d or 2-d")
        object.__setattr__(self, "samples", _freeze(s))

    @property
    def size(self):
        return self.samples.shape[0] if self.samples.ndim == 1 else self.samples.shape

    @property
    def nodes(self):
        if self.samples.ndim == 1:
            return grid_nodes(self.samples.shape[0])
        return tuple(grid_nodes(M) for M in self.samples.shape)


def to_samples(f: "TrigPoly | BivariateTrigPoly", M) -> GridFunction:
    if isinstance(f, TrigPoly):
        return GridFunction(f.values_on_grid(int(M)), source_degree=f.degree)
    M1, M2 = (int(M), int(M)) if np.isscalar(M) else (int(M[0]), int(M[1]))
    return GridFunction(f.values_on_grid(M1, M2), source_degree=f.degrees)


def from_samples(g: GridFunction, N) -> "TrigPoly | BivariateTrigPoly":
    """Inverse DFT onto the band |k| <= N; refuses grids that alias."""
    if g.samples.ndim == 1:
        N = int(N)
        M = g.samples.shape[0]
        known = g.source_degree if g.source_degree is not None else N
        if M < 2 * max(N, int(known)) + 1:
            raise ValueError(
                f"aliasing risk: grid of {M} nodes cannot resolve degree {max(N, int(known))}")
        chat = np.fft.fft(g.samples) / M
        return TrigPoly(chat[np.arange(-N, N + 1) % M])
    N1, N2 = (int(N), int(N)) if np.isscalar(N) else (int(N[0]), int(N[1]))
    M1, M2 = g.samples.shape
    k1, k2 = (N1, N2) if g.source_degree is None else (
        max(N1, int(g.source_degree[0])), max(N2, int(g.source_degree[1])))
    if M1 < 2 * k1 + 1 or M2 < 2 * k2 + 1:
        raise ValueError(f"aliasing risk: grid {M1}x{M2} cannot resolve degrees ({k1},{k2})")
    chat = np.fft.fft2(g.samples) / (M1 * M2)
    rows = np.arange(-N1, N1 + 1) % M1
    cols = np.arange(-N2, N2 + 1) % M2
    return BivariateTrigPoly(chat[np.ix_(rows, cols)])


@dataclass(frozen=True)
class BivariateTrigPoly:
    """K(x, y) = sum_{|k|<=N1, |l|<=N2} c_{k,l} e^{i(kx+ly)}.

    ``shift_source`` is set when the kernel was built as g(x-y); it only
    enables cheaper section extraction and never changes semantics.
    """

    coeffs: np.ndarray
    shift_source: TrigPoly | None = field(default=None, compare=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.ndim != 2 or c.shape[0] % 2 == 0 or c.shape[1] % 2 == 0:
            raise ValueError("need a 2-d coefficient array with odd sides")
        object.__setattr__(self, "coeffs", _freeze(c))

    @property
    def degrees(self) -> tuple[int, int]:
        return ((self.coeffs.shape[0] - 1) // 2, (self.coeffs.shape[1] - 1) // 2)

    @classmethod
    def zero(cls, N1: int, N2: int) -> "BivariateTrigPoly":
        return cls(np.zeros((2 * N1 + 1, 2 * N2 + 1), dtype=np.complex128))

    @classmethod
    def tensor(cls, u: TrigPoly, v: TrigPoly) -> "BivariateTrigPoly":
        """u(x) v(y), i.e. c_{k,l} = u_k v_l."""
        return cls(np.outer(u.coeffs, v.coeffs))

    def pad(self, N1: int, N2: int) -> "BivariateTrigPoly":
        d1, d2 = self.degrees
        if N1 < d1 or N2 < d2:
            raise ValueError("cannot pad below the current degrees")
        if (N1, N2) == (d1, d2):
            return self
        return BivariateTrigPoly(
            np.pad(self.coeffs, ((N1 - d1, N1 - d1), (N2 - d2, N2 - d2))),
            shift_source=self.shift_source)

    def __add__(self, other: "BivariateTrigPoly") -> "BivariateTrigPoly":
        n1 = max(self.degrees[0], other.degrees[0])
        n2 = max(self.degrees[1], other.degrees[1])
        return BivariateTrigPoly(self.pad(n1, n2).coeffs + other.pad(n1, n2).coeffs)

    def __sub__(self, other: "BivariateTrigPoly") -> "BivariateTrigPoly":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "BivariateTrigPoly":
        return BivariateTrigPoly(self.coeffs * complex(scalar), shift_source=None)

    __rmul__ = __mul__

    def transpose(self) -> "BivariateTrigPoly":
        """K(y, x); swaps the roles of the two variables."""
        return BivariateTrigPoly(self.coeffs.T, shift_source=None)

    @property
    def is_real(self) -> bool:
        flipped = np.conj(self.coeffs[::-1, ::-1])
        scale = max(1.0, float(np.abs(self.coeffs).max(initial=0.0)))
        return bool(np.abs(self.coeffs - flipped).max(initial=0.0) <= 1e-14 * scale)

    def eval(self, x, y):
        N1, N2 = self.degrees
        ks = np.arange(-N1, N1 + 1)
        ls = np.arange(-N2, N2 + 1)
        ex = np.exp(1j * np.multiply.outer(np.asarray(x, dtype=float), ks))
        ey = np.exp(1j * np.multiply.outer(np.asarray(y, dtype=float), ls))
        out = np.einsum("...k,kl,...l->...", ex, self.coeffs, ey)
        if np.isscalar(x) and np.isscalar(y):
            return complex(out)
        return out

    def section_x(self, xi: float) -> TrigPoly:
        """The y-section K(xi, .) as a univariate polynomial."""
        if self.shift_source is not None:
            g = self.shift_source
            ks = np.arange(-g.degree, g.degree + 1)
            # g(xi - y) = sum_k g_k e^{ik xi} e^{-iky}: coefficient at -k
            return TrigPoly((g.coeffs * np.exp(1j * ks * xi))[::-1])
        N1 = self.degrees[0]
        phases = np.exp(1j * np.arange(-N1, N1 + 1) * xi)
        return TrigPoly(phases @ self.coeffs)

    def section_y(self, eta: float) -> TrigPoly:
        N2 = self.degrees[1]
        phases = np.exp(1j * np.arange(-N2, N2 + 1) * eta)
        return TrigPoly(self.coeffs @ phases)

    def values_on_grid(self, M1: int, M2: int) -> np.ndarray:
        w = _wrap_axis(_wrap_axis(self.coeffs, M1, 0), M2, 1)
        return np.fft.ifft2(w) * (M1 * M2)


def convolve(f, g):
    """(f*g) in the normalized measure: coefficients multiply, so the result
    lives on the common band."""
    if isinstance(f, TrigPoly) and isinstance(g, TrigPoly):
        n = min(f.degree, g.degree)
        lo_f, lo_g = f.degree - n, g.degree - n
        return TrigPoly(f.coeffs[lo_f:lo_f + 2 * n + 1] * g.coeffs[lo_g:lo_g + 2 * n + 1])
    if isinstance(f, BivariateTrigPoly) and isinstance(g, BivariateTrigPoly):
        n1 = min(f.degrees[0], g.degrees[0])
        n2 = min(f.degrees[1], g.degrees[1])
        af = f.coeffs[f.degrees[0] - n1:f.degrees[0] + n1 + 1,
                      f.degrees[1] - n2:f.degrees[1] + n2 + 1]
        ag = g.coeffs[g.degrees[0] - n1:g.degrees[0] + n1 + 1,
                      g.degrees[1] - n2:g.degrees[1] + n2 + 1]
        return BivariateTrigPoly(af * ag)
    raise TypeError("convolve needs two polynomials of the same arity")


def norm(f: TrigPoly, p, oversample: int = 16) -> float:
    """L_p norm on a uniform grid of oversample*(2N+1) nodes.

    p < inf uses the trapezoidal rule (exact for even integer p at this
    resolution); p = inf is the grid maximum, an underestimate whose bias
    is controlled by the oversampling factor.
    """
    p = check_exponent(p)
    if oversample < 4:
        raise ValueError("oversample must be at least 4")
    M = norm_grid_size(f.degree, oversample)
    vals = np.abs(f.values_on_grid(M))
    if p == INF:
        return float(vals.max())
    return float(np.mean(vals ** p) ** (1.0 / p))


def norm2(f: TrigPoly) -> float:
    """Exact L_2 norm via Parseval."""
    return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2)))


def mixed_norm(F: BivariateTrigPoly, p, order: str = "x-first",
               oversample: int = 4, batch: int = _NORM_BATCH) -> float:
    """Iterated vector norm of a bivariate polynomial on a tensor grid.

    ``p = (p1, p2)`` always pairs p1 with x and p2 with y.  With
    ``order="x-first"`` the x-norm is applied first (the plain vector norm);
    ``order="y-first"`` applies the y-norm first (the starred norm used for
    sup-type bounds).  Evaluation streams over x so only one
    (batch x grid) block of values is ever materialized.
    """
    p1, p2 = (check_exponent(p[0]), check_exponent(p[1]))
    if order not in ("x-first", "y-first"):
        raise ValueError(f"order must be 'x-first' or 'y-first', got {order!r}")
    if oversample < 4:
        raise ValueError("oversample must be at least 4")
    Lx, Ly = F.coeffs.shape
    Mx, My = fast_grid_size(oversample * Lx), fast_grid_size(oversample * Ly)
    # transform the x-axis once; y is transformed per batch of x-rows
    E1 = np.fft.ifft(_wrap_axis(F.coeffs, Mx, 0), axis=0) * Mx

    if order == "x-first":
        acc = np.zeros(My)
        for lo in range(0, Mx, batch):
            V = np.abs(np.fft.ifft(_wrap_last(E1[lo:lo + batch], My), axis=1) * My)
            if p1 == INF:
                np.maximum(acc, V.max(axis=0), out=acc)
            else:
                acc += (V ** p1).sum(axis=0)
        inner = acc if p1 == INF else (acc / Mx) ** (1.0 / p1)
        if p2 == INF:
            return float(inner.max())
        return float(np.mean(inner ** p2) ** (1.0 / p2))

    rows = np.empty(Mx)
    for lo in range(0, Mx, batch):
        V = np.abs(np.fft.ifft(_wrap_last(E1[lo:lo + batch], My), axis=1) * My)
        if p2 == INF:
            rows[lo:lo + batch] = V.max(axis=1)
        else:
            rows[lo:lo + batch] = np.mean(V ** p2, axis=1) ** (1.0 / p2)
    if p1 == INF:
        return float(rows.max())
    return float(np.mean(rows ** p1) ** (1.0 / p1))


def norm_biv(F: BivariateTrigPoly, p, oversample: int = 4) -> float:
    """Plain L_p norm on the torus square."""
    return mixed_norm(F, (p, p), "x-first", oversample=oversample)


def random_trigpoly(degree: int, rng: np.random.Generator, real: bool = True,
                    decay: float = 0.0) -> TrigPoly:
    """Gaussian random coefficients, optionally Hermitian-symmetrized and
    damped like |k|^-decay."""
    n = degree
    c = rng.standard_normal(2 * n + 1) + 1j * rng.standard_normal(2 * n + 1)
    if decay > 0:
        ks = np.abs(np.arange(-n, n + 1)).astype(float)
        ks[n] = 1.0
        c *= ks ** (-decay)
    if real:
        c = 0.5 * (c + np.conj(c[::-1]))
    return TrigPoly(c)


def random_bivariate(degrees, rng: np.random.Generator, real: bool = True) -> BivariateTrigPoly:
    n1, n2 = degrees
    c = rng.standard_normal((2 * n1 + 1, 2 * n2 + 1)) \
        + 1j * rng.standard_normal((2 * n1 + 1, 2 * n2 + 1))
    if real:
        c = 0.5 * (c + np.conj(c[::-1, ::-1]))
    return BivariateTrigPoly(c)
