"""Classical trigonometric kernels: Dirichlet, Fejer, de la Vallee Poussin,
dyadic difference blocks, (generalized) Bernoulli, and the inverse-power
kernel that undoes Bernoulli smoothing on a fixed band.

Constructors are coefficient-exact.  The Bernoulli families are infinite
series and get truncated; ``bernoulli_tail_bound`` gives the analytic bound
on the dropped coefficient mass so experiments can check that the
truncation is negligible next to what they measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polys import BivariateTrigPoly, TrigPoly, convolve

DEFAULT_TRUNCATION = 4096


def dirichlet(n: int) -> TrigPoly:
    """D_n: coefficient 1 on |k| <= n.  D_n(0) = 2n+1 and the nodes
    2*pi*j/(2n+1), j = 1..2n, are its zeros."""
    if n < 0:
        raise ValueError("dirichlet needs n >= 0")
    return TrigPoly(np.ones(2 * n + 1, dtype=np.complex128))


def fejer(j: int) -> TrigPoly:
    """K_j: coefficients (1 - |k|/j)_+, a nonnegative polynomial of degree
    j-1 with unit mean."""
    if j < 1:
        raise ValueError("fejer needs j >= 1")
    n = j - 1
    ks = np.arange(-n, n + 1)
    return TrigPoly((1.0 - np.abs(ks) / j).astype(np.complex128))


def vallee_poussin(n: int) -> TrigPoly:
    """V_n = 2 K_{2n} - K_n: degree 2n-1, coefficient 1 on |k| <= n, linear
    rolloff above; reproduces every polynomial of degree n under
    convolution."""
    if n < 1:
        raise ValueError("vallee_poussin needs n >= 1")
    return 2.0 * fejer(2 * n) - fejer(n)


def a_block_kernel(s: int) -> TrigPoly:
    """Dyadic difference blocks: the s = 0 block is the constant 1, s = 1 is
    V_1 - 1, and s >= 2 is V_{2^(s-1)} - V_{2^(s-2)}.  They telescope to
    V_{2^(S-1)} when summed up to S >= 2."""
    if s < 0:
        raise ValueError("block index must be nonnegative")
    if s == 0:
        return TrigPoly.constant(1.0)
    if s == 1:
        return vallee_poussin(1) - TrigPoly.constant(1.0)
    return vallee_poussin(2 ** (s - 1)) - vallee_poussin(2 ** (s - 2))


def a_block(f: TrigPoly, s: int) -> TrigPoly:
    """Convolution of f with the s-th dyadic block; acts as a band
    multiplier, so the result lives on the intersection of the bands."""
    return convolve(f, a_block_kernel(s))


def bernoulli(a: float, truncation: int = DEFAULT_TRUNCATION,
              alpha: float | None = None) -> TrigPoly:
    """Smoothing kernel 1 + 2 sum_{k>=1} k^-a cos(kx - alpha*pi/2), truncated
    at |k| <= truncation.  alpha defaults to a, the classical choice whose
    convolution realizes an a-th order antiderivative."""
    if a <= 1.0:
        raise ValueError("divergent kernel: Bernoulli smoothing needs a > 1")
    if truncation < 1:
        raise ValueError("truncation must be a positive integer")
    if alpha is None:
        alpha = a
    T = int(truncation)
    c = np.zeros(2 * T + 1, dtype=np.complex128)
    ks = np.arange(1, T + 1, dtype=float)
    c[T] = 1.0
    c[T + 1:] = ks ** (-a) * np.exp(-1j * alpha * np.pi / 2)
    c[:T][::-1] = ks ** (-a) * np.exp(+1j * alpha * np.pi / 2)
    return TrigPoly(c)


def gen_bernoulli(a: float, alpha: float, truncation: int = DEFAULT_TRUNCATION) -> TrigPoly:
    return bernoulli(a, truncation, alpha=alpha)


def inverse_power_kernel(a: float, alpha: float, n: int) -> TrigPoly:
    """1 + 2 sum_{k=1}^{2n} k^a cos(kx + alpha*pi/2): the degree-2n kernel
    whose convolution inverts the (a, alpha) smoothing on that band."""
    if n < 1:
        raise ValueError("inverse kernel needs n >= 1")
    c = np.zeros(4 * n + 1, dtype=np.complex128)
    ks = np.arange(1, 2 * n + 1, dtype=float)
    c[2 * n] = 1.0
    c[2 * n + 1:] = ks ** a * np.exp(+1j * alpha * np.pi / 2)
    c[:2 * n][::-1] = ks ** a * np.exp(-1j * alpha * np.pi / 2)
    return TrigPoly(c)


def shift_kernel(g: TrigPoly) -> BivariateTrigPoly:
    """K(x, y) = g(x - y): coefficients g_k sit on the anti-diagonal (k, -k)."""
    n = g.degree
    C = np.zeros((2 * n + 1, 2 * n + 1), dtype=np.complex128)
    idx = np.arange(2 * n + 1)
    C[idx, 2 * n - idx] = g.coeffs
    return BivariateTrigPoly(C, shift_source=g)


def bernoulli_tail_bound(a: float, truncation: int) -> float:
    """Upper bound 2 T^(1-a) / (a-1) on the dropped coefficient mass
    sum_{|k| > T} |k|^-a."""
    if a <= 1.0:
        raise ValueError("divergent kernel: tail is infinite for a <= 1")
    return 2.0 * truncation ** (1.0 - a) / (a - 1.0)


def retained_l2_mass(a: float, truncation: int) -> float:
    ks = np.arange(1, truncation + 1, dtype=float)
    return float(np.sqrt(1.0 + 2.0 * np.sum(ks ** (-2.0 * a))))


def truncation_tail_l2(a: float, truncation: int) -> float:
    """Analytic bound on the L_2 mass beyond the truncation."""
    if a <= 0.5:
        return float("inf")
    return float(np.sqrt(2.0 * truncation ** (1.0 - 2.0 * a) / (2.0 * a - 1.0)))


def assert_truncation_ok(a: float, truncation: int, rel: float = 1e-6) -> float:
    """Require the truncated L_2 tail to be at most ``rel`` of the retained
    mass; returns the measured ratio."""
    ratio = truncation_tail_l2(a, truncation) / retained_l2_mass(a, truncation)
    if ratio > rel:
        raise ValueError(
            f"truncation {truncation} leaves a relative L2 tail {ratio:.3e} > {rel:.1e} "
            f"for smoothness a={a}; raise the truncation")
    return ratio


_FAMILIES = {
    "dirichlet": ("n",),
    "fejer": ("j",),
    "vdlp": ("n",),
    "ablock": ("s",),
    "bernoulli": ("a", "t"),
    "genbernoulli": ("a", "alpha", "t"),
    "inversed": ("a", "alpha", "n"),
}

_INT_KEYS = {"n", "j", "s", "t"}


@dataclass(frozen=True)
class KernelSpec:
    """Tagged description of a kernel family, with a canonical text form
    like ``bernoulli:a=2.5,T=4096`` or ``vdlp:n=16``."""

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        fam = self.family.lower()
        if fam not in _FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        allowed = _FAMILIES[fam]
        params = {}
        for key, value in self.params.items():
            k = key.lower()
            if k not in allowed:
                raise ValueError(f"unknown key {key!r} for kernel family {fam!r}")
            params[k] = int(value) if k in _INT_KEYS else float(value)
        if fam == "bernoulli":
            params.setdefault("t", DEFAULT_TRUNCATION)
        if fam == "genbernoulli":
            params.setdefault("t", DEFAULT_TRUNCATION)
        missing = [k for k in allowed if k not in params]
        if missing:
            raise ValueError(f"kernel family {fam!r} is missing keys {missing}")
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "params", dict(params))

    @property
    def text(self) -> str:
        shown = {"t": "T"}
        body = ",".join(f"{shown.get(k, k)}={_fmt_param(v)}" for k, v in sorted(self.params.items()))
        return f"{self.family}:{body}"

    def tail_bound(self) -> float | None:
        """Dropped coefficient mass for the truncated families, None for the
        finite ones."""
        if self.family in ("bernoulli", "genbernoulli"):
            return bernoulli_tail_bound(self.params["a"], self.params["t"])
        return None


def _fmt_param(v) -> str:
    if isinstance(v, int) or float(v).is_integer():
        return str(int(v))
    return repr(float(v))


def parse_kernel_spec(text: str) -> KernelSpec:
    """Parse the canonical text form; names and keys are case-insensitive,
    unknown keys are errors."""
    head, _, body = text.strip().partition(":")
    fam = head.strip().lower()
    params = {}
    if body.strip():
        for item in body.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise ValueError(f"malformed kernel parameter {item!r}")
            params[key.strip().lower()] = float(value)
    return KernelSpec(fam, params)


def make_kernel(spec: KernelSpec | str) -> TrigPoly:
    if isinstance(spec, str):
        spec = parse_kernel_spec(spec)
    fam, p = spec.family, spec.params
    if fam == "dirichlet":
        return dirichlet(p["n"])
    if fam == "fejer":
        return fejer(p["j"])
    if fam == "vdlp":
        return vallee_poussin(p["n"])
    if fam == "ablock":
        return a_block_kernel(p["s"])
    if fam == "bernoulli":
        return bernoulli(p["a"], p["t"])
    if fam == "genbernoulli":
        return gen_bernoulli(p["a"], p["alpha"], p["t"])
    if fam == "inversed":
        return inverse_power_kernel(p["a"], p["alpha"], p["n"])
    raise AssertionError(fam)
