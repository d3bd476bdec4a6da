"""Smoothness classes on the torus and worst-case recovery errors.

Two constructions are covered: convolution classes (unit-ball sources
smoothed by a Bernoulli-type kernel) and bounded-mixed-difference classes,
together with the kernel classes obtained as images of unit balls under an
integral operator K.  The worst-case recovery error of a plan over such a
kernel class is a mixed norm of the residual kernel
K(x,y) - sum_j K(xi_j, y) psi_j(x), which is computed here exactly on the
coefficient level and then measured on tensor grids.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .kernels import bernoulli, shift_kernel, vallee_poussin
from .operators import MultiplierParams, RecoveryPlan, multiplier
from .polys import (INF, BivariateTrigPoly, TrigPoly, check_exponent, convolve,
                    dual_exponent, mixed_norm, norm)


@dataclass(frozen=True)
class SmoothnessParams:
    """Smoothness vector a, integrability vector q, and the difference order
    l used by the mixed-difference test; l must exceed every entry of a."""

    a: tuple
    q: tuple
    l: int

    def __post_init__(self):
        a = tuple(float(t) for t in (self.a if np.iterable(self.a) else (self.a,)))
        q = tuple(check_exponent(t) for t in (self.q if np.iterable(self.q) else (self.q,)))
        if any(t <= 0 for t in a):
            raise ValueError("smoothness entries must be positive")
        if self.l <= max(a):
            raise ValueError(f"difference order l={self.l} must exceed max(a)={max(a)}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "q", q)


@dataclass(frozen=True)
class KernelClass:
    """Image of the unit L_q ball under the integral operator with kernel K."""

    kernel: BivariateTrigPoly
    q: float

    def __post_init__(self):
        object.__setattr__(self, "q", check_exponent(self.q))

    @property
    def dual(self) -> float:
        return dual_exponent(self.q)


def wk_member(kc: KernelClass, phi: TrigPoly) -> TrigPoly:
    """f(x) = integral of K(x, y) phi(y) in the normalized measure; the
    class member generated by the source phi."""
    g = kc.kernel.shift_source
    if g is not None:
        return convolve(g, phi)
    N1, N2 = kc.kernel.degrees
    src = phi.pad(max(phi.degree, N2)).coeffs
    lo = phi.degree if phi.degree > N2 else N2
    # coefficient f_k = sum_l C[k, l] phi_hat(-l)
    window = src[lo - N2: lo + N2 + 1][::-1]
    return TrigPoly(kc.kernel.coeffs @ window)


def class_source(f: TrigPoly, r: float) -> TrigPoly:
    """Exact preimage of f under convolution with the order-r Bernoulli
    kernel (the full-band inverse multiplier)."""
    ks = np.arange(-f.degree, f.degree + 1)
    vals = np.ones(ks.shape, dtype=np.complex128)
    phase = np.exp(1j * r * np.pi / 2)
    vals[ks > 0] = np.abs(ks[ks > 0]).astype(float) ** r * phase
    vals[ks < 0] = np.abs(ks[ks < 0]).astype(float) ** r / phase
    return TrigPoly(f.coeffs * vals)


def w_member(a: float, q, phi: TrigPoly, truncation: int = 4096) -> TrigPoly:
    """Representative phi * F_a of the convolution class; sources violating
    the unit-ball constraint are rescaled with a warning."""
    q = check_exponent(q)
    nrm = norm(phi, q)
    if nrm > 1.0 + 1e-12:
        warnings.warn(f"source has L_{q} norm {nrm:.3g} > 1; rescaling into the unit ball")
        phi = (1.0 / nrm) * phi
    T = max(int(truncation), phi.degree)
    return convolve(phi, bernoulli(a, T))


# ---------------------------------------------------------------------------
# Membership margins


def _difference_multiplier(t: float, l: int, N: int) -> np.ndarray:
    ks = np.arange(-N, N + 1)
    return (np.exp(1j * ks * t) - 1.0) ** l


def h_check(f: BivariateTrigPoly, params: SmoothnessParams, mode: str = "blocks",
            oversample: int = 4, t_levels: int = 9) -> float:
    """Membership margin of f in the mixed-difference class.

    mode="differences": smallest B with ||Delta_t^l(e) f||_q <= B prod |t_j|^{a_j}
    over a dyadic grid t_j = pi 2^-u and all subsets e of {1, 2}.
    mode="blocks": max_s ||A_s(f)||_q 2^{(a, s)} over the dyadic blocks that
    meet the spectrum.  Both are finite for polynomials.
    """
    if len(params.a) != 2 or len(params.q) != 2:
        raise ValueError("bivariate margin needs two-component parameters")
    a1, a2 = params.a
    q = params.q
    N1, N2 = f.degrees

    if mode == "blocks":
        from .kernels import a_block_kernel
        smax1 = max(2, int(math.ceil(math.log2(max(N1, 1)))) + 2)
        smax2 = max(2, int(math.ceil(math.log2(max(N2, 1)))) + 2)
        mults1 = {s: _block_multiplier(a_block_kernel(s), N1) for s in range(smax1 + 1)}
        mults2 = {s: _block_multiplier(a_block_kernel(s), N2) for s in range(smax2 + 1)}
        best = 0.0
        for s1 in range(smax1 + 1):
            m1 = mults1[s1]
            if not m1.any():
                continue
            for s2 in range(smax2 + 1):
                m2 = mults2[s2]
                if not m2.any():
                    continue
                block = BivariateTrigPoly(f.coeffs * np.outer(m1, m2))
                val = mixed_norm(block, q, "x-first", oversample=oversample)
                best = max(best, val * 2.0 ** (a1 * s1 + a2 * s2))
        return best

    if mode != "differences":
        raise ValueError(f"mode must be 'blocks' or 'differences', got {mode!r}")
    ts = [math.pi * 2.0 ** (-u) for u in range(t_levels)]
    l = params.l
    best = mixed_norm(f, q, "x-first", oversample=oversample)  # e = {}
    for t1 in ts:  # e = {1}
        g = BivariateTrigPoly(f.coeffs * _difference_multiplier(t1, l, N1)[:, None])
        best = max(best, mixed_norm(g, q, "x-first", oversample=oversample) / t1 ** a1)
    for t2 in ts:  # e = {2}
        g = BivariateTrigPoly(f.coeffs * _difference_multiplier(t2, l, N2)[None, :])
        best = max(best, mixed_norm(g, q, "x-first", oversample=oversample) / t2 ** a2)
    for t1 in ts:  # e = {1, 2}
        d1 = _difference_multiplier(t1, l, N1)
        for t2 in ts:
            g = BivariateTrigPoly(f.coeffs * np.outer(d1, _difference_multiplier(t2, l, N2)))
            best = max(best, mixed_norm(g, q, "x-first", oversample=oversample)
                       / (t1 ** a1 * t2 ** a2))
    return best


def _block_multiplier(block: TrigPoly, N: int) -> np.ndarray:
    """Frequency response of a dyadic block restricted to |k| <= N."""
    out = np.zeros(2 * N + 1, dtype=np.complex128)
    n = min(N, block.degree)
    out[N - n:N + n + 1] = block.coeffs[block.degree - n:block.degree + n + 1]
    return out


# ---------------------------------------------------------------------------
# Worst-case recovery error over a kernel class


def recovery_residual(kc: KernelClass, plan: RecoveryPlan) -> BivariateTrigPoly:
    """Coefficient matrix of K(x,y) - sum_j K(xi_j, y) psi_j(x)."""
    K = kc.kernel
    N1, N2 = K.degrees
    Nx = max(N1, plan.max_degree() if plan.m else 0)
    C = np.zeros((2 * Nx + 1, 2 * N2 + 1), dtype=np.complex128)
    C[Nx - N1:Nx + N1 + 1, :] = K.coeffs
    if plan.m:
        psi = plan.coeff_matrix(Nx)                      # (2Nx+1) x m
        sections = np.empty((plan.m, 2 * N2 + 1), dtype=np.complex128)
        for j, xi in enumerate(np.atleast_1d(plan.points)):
            sections[j] = K.section_x(float(xi)).pad(N2).coeffs
        C -= psi @ sections
    return BivariateTrigPoly(C)


def worst_case_error(kc: KernelClass, plan: RecoveryPlan, p,
                     oversample: int = 4) -> float:
    """Worst recovery error of the plan over the kernel class, measured in
    L_p.  For p < inf this is the (p, q') vector norm of the residual
    kernel, an upper bound on the class error; for p = inf it is the
    sup-over-x of the L_q' sections, which equals the class error exactly.
    """
    p = check_exponent(p)
    res = recovery_residual(kc, plan)
    qd = kc.dual
    if p == INF:
        return mixed_norm(res, (INF, qd), "y-first", oversample=oversample)
    return mixed_norm(res, (p, qd), "x-first", oversample=oversample)


def extremal_kernel(r, q1, n: int, oversample: int = 16):
    """Normalized shift-invariant kernel V_n(x-y) scaled into the mixed
    class of smoothness r = (r1, r2) with integrability (q1, inf).

    Applying the roughening multipliers in x and then y collapses, for a
    shift-invariant kernel, to a single univariate roughening of order
    r1+r2 with phase r1-r2; the translation identity turns the mixed
    (q1, inf) norm of that into a plain univariate norm whose reciprocal is
    the certified scale.
    """
    r1, r2 = float(r[0]), float(r[1])
    q1 = check_exponent(q1)
    if n < 2:
        raise ValueError("extremal kernel needs n >= 2")
    g = vallee_poussin(n)
    rough = multiplier("D", MultiplierParams(r1 + r2, r1 - r2, n), g)
    scale = 1.0 / norm(rough, q1, oversample=oversample)
    return shift_kernel(g), scale


# ---------------------------------------------------------------------------
# Text form of class specs


def format_class_spec(kind: str, **kw) -> str:
    def tup(v):
        return "(" + ",".join(_num(t) for t in v) + ")"
    if kind == "W":
        return f"W:a={tup(kw['a'])},q={tup(kw['q'])}"
    if kind == "HK":
        return f"HK:r={tup(kw['r'])},q1={_num(kw['q1'])},n={int(kw['n'])}"
    raise ValueError(f"unknown class kind {kind!r}")


def _num(v) -> str:
    v = float(v)
    if v == INF:
        return "inf"
    if v.is_integer():
        return str(int(v))
    return repr(v)


def parse_class_spec(text: str) -> dict:
    """Parse class specs like ``W:a=(2,3),q=(1,inf)`` or
    ``HK:r=(2,2),q1=1,n=32``."""
    head, _, body = text.strip().partition(":")
    kind = head.strip().upper()
    if kind not in ("W", "HK"):
        raise ValueError(f"unknown class kind {head!r}")
    out: dict = {"kind": kind}
    expected = {"W": {"a", "q"}, "HK": {"r", "q1", "n"}}[kind]
    for key, value in _split_kv(body):
        k = key.strip().lower()
        if k not in expected:
            raise ValueError(f"unknown key {key!r} for class kind {kind}")
        out[k] = value
    missing = expected - set(out)
    if missing:
        raise ValueError(f"class spec is missing keys {sorted(missing)}")
    if kind == "HK":
        out["n"] = int(out["n"][0]) if isinstance(out["n"], tuple) else int(out["n"])
        out["q1"] = out["q1"][0] if isinstance(out["q1"], tuple) else out["q1"]
    return out


def _split_kv(body: str):
    depth = 0
    item = ""
    items = []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            items.append(item)
            item = ""
        else:
            item += ch
    if item.strip():
        items.append(item)
    for it in items:
        key, eq, value = it.partition("=")
        if not eq:
            raise ValueError(f"malformed class parameter {it!r}")
        value = value.strip()
        if value.startswith("(") and value.endswith(")"):
            yield key, tuple(_parse_num(t) for t in value[1:-1].split(","))
        else:
            yield key, _parse_num(value)


def _parse_num(s: str) -> float:
    s = s.strip().lower()
    if s in ("inf", "infinity", "oo"):
        return INF
    return float(s)
