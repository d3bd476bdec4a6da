"""Command-line front end.

Verbs: kernel (construct and measure), recover (run a recovery operator on
a kernel-spec function), sparse (m-term engines), cubature (greedy knots
and weights), verify (exact identity checks), rates (config-driven slope
experiments).  Exit codes: 0 success / verified, 1 failed verdict, 2 usage
errors.  All randomness flows through --seed, and identical invocations
write byte-identical files.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .experiments import (IDENTITY_IDS, VerifyInstance, parse_config,
                          run_experiment, verify_identity)
from .kernels import make_kernel, parse_kernel_spec, shift_kernel
from .operators import interpolate_In, recover_Rn, smolyak_Tn, TensorSampler
from .polys import INF, BivariateTrigPoly, norm, norm_biv
from .sparse import (DiscretizedKernel, cross_kk, cubature_optimize, greedy_lk,
                     svd_bilinear)


def _exp(s: str) -> float:
    return INF if s.strip().lower() in ("inf", "infinity") else float(s)


def _norm_pair(s: str):
    parts = s.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'p,q' with two entries, got {s!r}")
    return (_exp(parts[0]), _exp(parts[1]))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trigrec",
                                 description="trigonometric recovery and sparse kernel lab")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="verb", required=True)

    k = sub.add_parser("kernel", help="construct a kernel and print norms")
    k.add_argument("--spec", required=True, help="kernel spec, e.g. 'fejer:j=4'")
    k.add_argument("--norms", default="1,2,inf", help="comma list of exponents")
    k.add_argument("--oversample", type=int, default=16)
    k.add_argument("--out", default=None)

    r = sub.add_parser("recover", help="apply a recovery operator to a kernel-spec function")
    r.add_argument("--op", choices=("In", "Rn", "smolyak"), default="Rn")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--f", required=True, help="kernel spec of the function to recover")
    r.add_argument("--p", type=_exp, default=INF)
    r.add_argument("--oversample", type=int, default=16)

    s = sub.add_parser("sparse", help="m-term sparse approximation of a kernel")
    s.add_argument("--engine", choices=("svd", "lk", "kk"), required=True)
    s.add_argument("--kernel", required=True, help="univariate spec; K(x,y) = g(x-y)")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--grid", type=int, default=None)
    s.add_argument("--norm", type=_norm_pair, default=(INF, INF),
                   help="mixed norm 'p,q' for the lk engine")
    s.add_argument("--out", default=None, help="manifest path")

    c = sub.add_parser("cubature", help="greedy quadrature knots for a kernel class")
    c.add_argument("--kernel", required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--q", type=_exp, default=1.0)
    c.add_argument("--candidates", type=int, default=64)
    c.add_argument("--out", default=None)

    v = sub.add_parser("verify", help="run an exact identity check")
    v.add_argument("--id", required=True, choices=IDENTITY_IDS)
    v.add_argument("--n", type=int, default=8)
    v.add_argument("--a", type=float, default=2.5)
    v.add_argument("--alpha", type=float, default=1.0)
    v.add_argument("--b", type=float, default=1.0)
    v.add_argument("--beta", type=float, default=0.5)
    v.add_argument("--q", type=_exp, default=1.0)
    v.add_argument("--p", type=_exp, default=INF)
    v.add_argument("--m", type=int, default=2)
    v.add_argument("--degrees", type=int, nargs=2, default=(4, 4))
    v.add_argument("--candidates", type=int, default=10)
    v.add_argument("--instances", type=int, default=1)
    v.add_argument("--seed", type=int, default=0)

    t = sub.add_parser("rates", help="run a configured rate experiment")
    t.add_argument("--config", required=True)
    t.add_argument("--out", default=None)
    t.add_argument("--seed", type=int, default=None, help="override the config seed")
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("--layout", choices=("csv", "xy"), default="csv")

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.verb == "kernel":
        g = make_kernel(args.spec)
        lines = []
        for tok in args.norms.split(","):
            p = _exp(tok)
            val = norm(g, p, oversample=args.oversample)
            lines.append(f"{tok.strip()},{val:.12e}")
        text = "\n".join(lines) + "\n"
        print(text, end="")
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(f"# version={__version__}\n# spec={args.spec}\n"
                         f"# oversample={args.oversample}\np,norm\n" + text)
        return 0

    if args.verb == "recover":
        g = make_kernel(args.f)
        if args.op == "smolyak":
            res = smolyak_Tn(TensorSampler(g, g), args.n)
            F = BivariateTrigPoly.tensor(g, g)
            err = norm_biv(F - res.poly, args.p, oversample=4)
            print(f"level={args.n} samples={res.n_samples} error={err:.12e}")
            return 0
        rec = recover_Rn(g, args.n) if args.op == "Rn" else interpolate_In(g, args.n)
        err = norm(g - rec, args.p, oversample=args.oversample)
        print(f"op={args.op} n={args.n} error={err:.12e}")
        return 0

    if args.verb == "sparse":
        g = make_kernel(args.kernel)
        K = shift_kernel(g)
        M = args.grid or 4 * (2 * g.degree + 1)
        D = DiscretizedKernel.from_poly(K, M, M)
        if args.engine == "svd":
            approx, err = svd_bilinear(D, args.m)
        elif args.engine == "lk":
            approx, err = greedy_lk(D, args.m, norm_spec=args.norm)
        else:
            approx, err = cross_kk(D, args.m, norm_spec="sup")
        print(f"engine={args.engine} m={approx.m} error={err:.12e}")
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(f"# version={__version__}\n# kernel={args.kernel}\n# grid={M}\n"
                         + approx.manifest())
        return 0

    if args.verb == "cubature":
        g = make_kernel(args.kernel)
        K = shift_kernel(g)
        knots, weights, err, approx = cubature_optimize(K, args.m, args.q,
                                                        candidates=args.candidates)
        for z, w in zip(knots, np.atleast_1d(weights)):
            print(f"knot={z:.12f} weight={float(np.real(w)):.12e}")
        print(f"m={len(knots)} error={err:.12e}")
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(f"# version={__version__}\n# kernel={args.kernel}\n"
                         f"# q={args.q}\n# candidates={args.candidates}\n"
                         + approx.manifest())
        return 0

    if args.verb == "verify":
        worst = 0.0
        ok = True
        for i in range(args.instances):
            inst = VerifyInstance(n=args.n, a=args.a, alpha=args.alpha, b=args.b,
                                  beta=args.beta, q=args.q, p=args.p, m=args.m,
                                  degrees=tuple(args.degrees),
                                  candidates=args.candidates, seed=args.seed + i)
            rep = verify_identity(args.id, inst)
            worst = max(worst, rep.max_error)
            ok = ok and rep.passed
            print(f"{args.id} instance={i} max_error={rep.max_error:.3e} "
                  f"tolerance={rep.tolerance:.0e} {'PASS' if rep.passed else 'FAIL'}")
        return 0 if ok else 1

    if args.verb == "rates":
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
        if args.seed is not None:
            cfg["seed"] = args.seed
        report = run_experiment(cfg, jobs=args.jobs)
        text = report.csv()
        if args.layout == "xy":
            body = "\n".join(f"{m} {e:.12e}" for m, e in report.series) + "\n"
            text = "".join(line + "\n" for line in text.splitlines() if line.startswith("#")) + body
        print(f"slope={report.slope:.6f} stderr={report.stderr:.6f} "
              f"predicted={report.predicted:.6f} "
              f"verdict={'pass' if report.verdict else 'fail'}")
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        return 0 if report.verdict else 1

    raise AssertionError(args.verb)


if __name__ == "__main__":
    sys.exit(main())
