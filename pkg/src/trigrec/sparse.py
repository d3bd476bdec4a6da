"""m-term sparse approximation of bivariate kernels.

Four engines: Schmidt/SVD rank truncation over separable products,
greedy row-skeleton approximation (sections of the kernel itself as the
y-dictionary, free coefficient functions in x), full-pivot cross
approximation built on cross-functions K(x,b) K(a,y), and greedy knot
selection for quadrature weights against the dictionary of kernel
sections.  All engines work on a tensor-grid discretization and report
certified-on-the-grid errors; the reported numbers are upper bounds for
the corresponding best m-term quantities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polys import (INF, BivariateTrigPoly, GridFunction, TrigPoly, check_exponent,
                    dual_exponent, from_samples, grid_nodes, norm_grid_size)

PIVOT_FLOOR = 1e-13


@dataclass(frozen=True)
class DiscretizedKernel:
    """Kernel values on the M1 x M2 uniform tensor grid, with the polynomial
    it came from kept for exact reconstruction of the factors."""

    values: np.ndarray
    source: BivariateTrigPoly = field(compare=False)

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 2:
            raise ValueError("need a 2-d value matrix")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def shape(self):
        return self.values.shape

    @classmethod
    def from_poly(cls, K: BivariateTrigPoly, M1: int | None = None,
                  M2: int | None = None, oversample: int = 4) -> "DiscretizedKernel":
        N1, N2 = K.degrees
        M1 = norm_grid_size(N1, oversample) if M1 is None else int(M1)
        M2 = norm_grid_size(N2, oversample) if M2 is None else int(M2)
        vals = K.values_on_grid(M1, M2)
        if np.abs(vals.imag).max(initial=0.0) <= 1e-12 * max(1.0, np.abs(vals).max()):
            vals = vals.real
        return cls(vals, K)

    def transposed(self) -> "DiscretizedKernel":
        """Swap the roles of x and y (column-skeleton engines reuse the row
        ones through this)."""
        return DiscretizedKernel(self.values.T, self.source.transpose())


@dataclass(frozen=True)
class SparseApproximant:
    """m-term approximant: the dictionary tag, one term record per step, and
    the error after each step (errors[j] is the error with j terms)."""

    tag: str
    terms: tuple
    errors: tuple
    norm_spec: tuple | str = "l2"

    @property
    def m(self) -> int:
        return len(self.terms)

    def manifest(self) -> str:
        lines = [f"# dictionary={self.tag}", "term,anchor,coef_norm,cumulative_error"]
        for i, term in enumerate(self.terms):
            anchor, cnorm = _term_summary(self.tag, term)
            lines.append(f"{i + 1},{anchor},{cnorm:.12e},{self.errors[i + 1]:.12e}")
        return "\n".join(lines) + "\n"


def _term_summary(tag, term):
    if tag == "Pi":
        u, v = term
        return "-", float(np.sqrt(np.sum(np.abs(u.coeffs) ** 2) * np.sum(np.abs(v.coeffs) ** 2)))
    if tag == "LK":
        xi, psi = term
        return f"{xi:.12f}", float(np.sqrt(np.sum(np.abs(psi.coeffs) ** 2)))
    if tag == "KK":
        (a, b), w = term
        return f"{a:.12f}|{b:.12f}", float(abs(w))
    if tag == "CubatureD":
        xi, lam = term
        return f"{xi:.12f}", float(abs(lam))
    raise ValueError(tag)


def _grid_norm_1d(v: np.ndarray, p: float) -> float:
    if p == INF:
        return float(np.abs(v).max(initial=0.0))
    return float(np.mean(np.abs(v) ** p) ** (1.0 / p))


def _grid_mixed(values: np.ndarray, p, order: str = "x-first") -> float:
    """Discrete analogue of the iterated vector norm on the value matrix;
    rows index x, columns index y."""
    p1, p2 = check_exponent(p[0]), check_exponent(p[1])
    A = np.abs(values)
    if order == "x-first":
        inner = A.max(axis=0) if p1 == INF else np.mean(A ** p1, axis=0) ** (1.0 / p1)
        return float(inner.max()) if p2 == INF else float(np.mean(inner ** p2) ** (1.0 / p2))
    if order == "y-first":
        inner = A.max(axis=1) if p2 == INF else np.mean(A ** p2, axis=1) ** (1.0 / p2)
        return float(inner.max()) if p1 == INF else float(np.mean(inner ** p1) ** (1.0 / p1))
    raise ValueError(order)


def _recovery_norm(values: np.ndarray, p: float, qd: float) -> float:
    """The norm the recovery reduction uses: (p, q') vector norm for finite
    p, sup over x of the q' sections for p = inf."""
    if p == INF:
        return _grid_mixed(values, (INF, qd), "y-first")
    return _grid_mixed(values, (p, qd), "x-first")


# ---------------------------------------------------------------------------
# Schmidt / SVD over separable products


def svd_bilinear(K: DiscretizedKernel, m: int):
    """Best rank-m approximation in the normalized discrete L_2 norm; the
    error is the root-sum-square singular tail, which is exactly the best
    m-term error over separable products on this grid."""
    M1, M2 = K.shape
    if m > min(M1, M2):
        raise ValueError(f"rank {m} exceeds the grid rank {min(M1, M2)}")
    U, s, Vh = np.linalg.svd(K.values, full_matrices=False)
    scale = 1.0 / np.sqrt(M1 * M2)
    tails = np.sqrt(np.concatenate([np.cumsum((s ** 2)[::-1])[::-1], [0.0]])) * scale
    N1, N2 = K.source.degrees
    terms = []
    for t in range(m):
        u = from_samples(GridFunction(U[:, t] * s[t], source_degree=N1), N1)
        v = from_samples(GridFunction(Vh[t, :], source_degree=N2), N2)
        terms.append((u, v))
    approx = SparseApproximant("Pi", tuple(terms), tuple(float(t) for t in tails[:m + 1]),
                               norm_spec="l2")
    return approx, float(tails[m])


# ---------------------------------------------------------------------------
# Greedy row skeleton


def greedy_lk(K: DiscretizedKernel, m: int, norm_spec=(INF, INF)):
    """Greedy row-skeleton approximation sum_j psi_j(x) K(xi_j, y).

    Each step picks the grid row whose current residual has the largest
    y-section norm (full pivoting over the x-grid, smallest index on ties),
    then refits every coefficient function by least squares on the grid.
    The reported error is the requested mixed norm of the residual, an
    upper bound on the best row-skeleton error.
    """
    p, qd = check_exponent(norm_spec[0]), check_exponent(norm_spec[1])
    A = K.values
    M1, M2 = A.shape
    xs = grid_nodes(M1)
    N1, _ = K.source.degrees
    rows: list[int] = []
    coef = np.zeros((M1, 0), dtype=A.dtype)
    errors = [_recovery_norm(A, p, qd)]
    residual = A.copy()
    for _ in range(int(m)):
        secnorm = (np.abs(residual).max(axis=1) if qd == INF
                   else np.mean(np.abs(residual) ** qd, axis=1) ** (1.0 / qd))
        pick = int(np.argmax(secnorm))
        if secnorm[pick] <= PIVOT_FLOOR * max(1.0, np.abs(A).max()):
            errors.append(errors[-1])
            continue
        rows.append(pick)
        S = A[rows, :]                                   # j x M2 sections
        coef, *_ = np.linalg.lstsq(S.conj().T, A.conj().T, rcond=None)
        coef = coef.conj().T                             # M1 x j
        residual = A - coef @ S
        errors.append(_recovery_norm(residual, p, qd))
    terms = []
    for j, i in enumerate(rows):
        psi = from_samples(GridFunction(coef[:, j], source_degree=N1), N1)
        terms.append((float(xs[i]), psi))
    approx = SparseApproximant("LK", tuple(terms), tuple(errors), norm_spec=(p, qd))
    return approx, float(errors[-1])


def lk_plan(approx: SparseApproximant):
    """Points and coefficient functions of a row-skeleton approximant, ready
    to be fed to a recovery-plan consumer."""
    from .operators import RecoveryPlan
    pts = np.array([xi for xi, _ in approx.terms])
    fns = tuple(psi for _, psi in approx.terms)
    return RecoveryPlan(pts, fns)


# ---------------------------------------------------------------------------
# Cross functions


def cross_kk(K: DiscretizedKernel, m: int, norm_spec: str = "sup"):
    """Full-pivot cross approximation with terms K(x, b) K(a, y).

    Classical rank-1 residual updates: pick the residual's largest entry
    (i*, j*), subtract R[:, j*] R[i*, :] / R[i*, j*].  A pivot below the
    floor stops the engine ("numerically rank-deficient") and returns what
    it has.  The approximant equals A[:, J] inv(A[I, J]) A[I, :] divided by
    the kernel values at the crossing points.
    """
    if norm_spec not in ("sup", "l2"):
        raise ValueError(f"norm_spec must be 'sup' or 'l2', got {norm_spec!r}")
    A = K.values
    M1, M2 = A.shape
    xs, ys = grid_nodes(M1), grid_nodes(M2)
    p = INF if norm_spec == "sup" else 2.0

    def full_norm(R):
        return _grid_norm_1d(R.ravel(), p)

    residual = A.copy()
    errors = [full_norm(residual)]
    I: list[int] = []
    J: list[int] = []
    weights = []
    for _ in range(int(m)):
        flat = int(np.argmax(np.abs(residual)))
        i, j = divmod(flat, M2)
        pivot = residual[i, j]
        if abs(pivot) < PIVOT_FLOOR * max(1.0, np.abs(A).max()):
            import warnings
            warnings.warn("numerically rank-deficient: pivot below floor, "
                          "returning the current approximant")
            break
        I.append(i)
        J.append(j)
        weights.append(1.0 / pivot)
        residual = residual - np.outer(residual[:, j], residual[i, :]) / pivot
        errors.append(full_norm(residual))
    terms = tuple(((float(xs[i]), float(ys[j])), w) for i, j, w in zip(I, J, weights))
    approx = SparseApproximant("KK", terms, tuple(errors), norm_spec=norm_spec)
    return approx, float(errors[-1])


def cross_matrix(K: DiscretizedKernel, approx: SparseApproximant) -> np.ndarray:
    """Coefficient matrix M with approx = sum_{jk} K(x, b_j) M_{jk} K(a_k, y):
    the inverse of the pivot submatrix."""
    if not approx.terms:
        return np.zeros((0, 0))
    A = K.values
    xs, ys = grid_nodes(A.shape[0]), grid_nodes(A.shape[1])
    I = [int(np.argmin(np.abs(xs - a))) for (a, _), _ in approx.terms]
    J = [int(np.argmin(np.abs(ys - b))) for (_, b), _ in approx.terms]
    return np.linalg.inv(A[np.ix_(I, J)])


# ---------------------------------------------------------------------------
# Quadrature knots against the section dictionary


def kernel_mean_x(K: BivariateTrigPoly) -> TrigPoly:
    """J(y): the x-average of the kernel, read off the zero x-frequency row."""
    N1, _ = K.degrees
    return TrigPoly(K.coeffs[N1, :])


def cubature_error_for_knots(K: BivariateTrigPoly, knots, weights, q,
                             oversample: int = 4) -> float:
    """q'-norm of J - sum lambda_mu K(xi_mu, .) on the y-grid."""
    qd = dual_exponent(q)
    _, N2 = K.degrees
    My = oversample * (2 * N2 + 1)
    r = kernel_mean_x(K).values_on_grid(My)
    for xi, lam in zip(np.atleast_1d(knots), np.atleast_1d(weights)):
        r = r - lam * K.section_x(float(xi)).values_on_grid(My)
    return _grid_norm_1d(r, qd)


def cubature_optimize(K: BivariateTrigPoly, m: int, q, candidates: int = 64,
                      oversample: int = 4):
    """Greedy quadrature for the kernel class: knots are picked one at a time
    to best explain the running residual of J(y) = mean_x K, weights are
    refit by least squares each step, and the achieved q'-norm of the
    residual is reported (an upper bound on the optimal error; the least
    squares fit is the exact minimizer for q' = 2 and a surrogate
    otherwise, with the true q'-norm always reported)."""
    q = check_exponent(q)
    qd = dual_exponent(q)
    _, N2 = K.degrees
    My = oversample * (2 * N2 + 1)
    cand = grid_nodes(int(candidates))
    J = kernel_mean_x(K).values_on_grid(My)
    S = np.empty((len(cand), My), dtype=np.complex128)
    for i, z in enumerate(cand):
        S[i] = K.section_x(float(z)).values_on_grid(My)
    if K.is_real:
        J, S = J.real, S.real
    atom_norm = np.sqrt(np.mean(np.abs(S) ** 2, axis=1))
    usable = atom_norm > PIVOT_FLOOR

    chosen: list[int] = []
    weights = np.zeros(0)
    residual = J.copy()
    errors = [_grid_norm_1d(residual, qd)]
    for _ in range(int(m)):
        scores = np.abs(S @ residual.conj()) / np.where(usable, atom_norm, np.inf)
        scores[chosen] = -np.inf
        pick = int(np.argmax(scores))
        if not np.isfinite(scores[pick]) or scores[pick] <= PIVOT_FLOOR:
            errors.append(errors[-1])
            continue
        chosen.append(pick)
        weights, *_ = np.linalg.lstsq(S[chosen].T, J, rcond=None)
        residual = J - S[chosen].T @ weights
        errors.append(_grid_norm_1d(residual, qd))
    knots = cand[chosen]
    terms = tuple((float(z), complex(w) if np.iscomplexobj(weights) else float(w))
                  for z, w in zip(knots, weights))
    approx = SparseApproximant("CubatureD", terms, tuple(errors), norm_spec=qd)
    return knots, np.asarray(weights), float(errors[-1]), approx
