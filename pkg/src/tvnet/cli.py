"""Command-line interface: 6j tables and identity checks, Turaev-Viro
invariants and cylinder matrices, string-net spectra, and the
projector/state-sum equivalence check.

Every command prints a machine-parsable final line `RESULT <value>`.
Exit status: 0 success (and verification passed), 1 verification failure,
2 usage error. The comparison tolerance can be overridden with the
TVNET_TOL environment variable.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import qalgebra
from .qalgebra import get_context
from . import complex3
from .stringnet import (TrivalentLattice, honeycomb_torus, parse_lattice,
                        ground_degeneracy, ground_projector)
from .stringnet import projector_rank
from .tv import tv_closed, tv_matrix
from .equivalence import verify_projector_equals_tv, DEFAULT_TOL

__all__ = ["main"]


def _tolerance(args):
    env = os.environ.get("TVNET_TOL")
    if env is not None:
        return float(env)
    return getattr(args, "tol", None) or DEFAULT_TOL


def parse_label(text):
    """Accept half-integers as '3/2', '1.5' or '1'."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        val = float(num) / float(den)
    else:
        val = float(text)
    if abs(2 * val - round(2 * val)) > 1e-9:
        raise argparse.ArgumentTypeError(f"{text!r} is not a half-integer")
    return round(2 * val) / 2


def load_manifold(spec_str):
    if spec_str in complex3.CENSUS:
        return complex3.CENSUS[spec_str]()
    with open(spec_str) as fh:
        return complex3.parse_triangulation(fh.read())


def load_lattice(spec_str):
    if spec_str.startswith("honeycomb-torus"):
        rest = spec_str.split(":", 1)
        if len(rest) == 2:
            dims = rest[1].split("x")
            if len(dims) == 1:
                rows, cols = 1, int(dims[0])
            else:
                rows, cols = int(dims[0]), int(dims[1])
        else:
            rows, cols = 1, 2
        return honeycomb_torus(rows, cols)
    with open(spec_str) as fh:
        return parse_lattice(fh.read())


def _fmt(x):
    return f"{x:.12g}"


def cmd_q6j(args):
    ctx = get_context(args.r)
    if args.check:
        res = qalgebra.identity_residuals(ctx)
        for name, val in res.items():
            print(f"{name:14s} residual: {val:.3e}")
        worst = max(res.values())
        print(f"RESULT {_fmt(worst)}")
        return 0
    if args.all:
        count = 0
        for t, val in _nonzero_6j(ctx):
            print("{%g %g %g ; %g %g %g} = %.15g" % (*t, val))
            count += 1
        print(f"RESULT {count}")
        return 0
    if len(args.labels) != 6:
        print("q6j requires six labels (or --all/--check)", file=sys.stderr)
        return 2
    val = qalgebra.q6j(ctx, *args.labels)
    print(f"RESULT {_fmt(val)}")
    return 0


def _nonzero_6j(ctx):
    nl = ctx.num_labels
    import itertools
    for t in itertools.product(range(nl), repeat=6):
        val = ctx._sym6j[t]
        if val != 0.0:
            labels = tuple(x / 2 for x in t)
            yield labels, qalgebra.q6j(ctx, *labels)


def _sharded_tv(tri, ctx, threads, signed):
    if threads <= 1:
        return tv_closed(tri, ctx, signed=signed)
    shards = range(min(threads, ctx.num_labels))
    n = len(shards)
    with ThreadPoolExecutor(max_workers=threads) as ex:
        futures = [ex.submit(tv_closed, tri, ctx, signed, (k, n))
                   for k in shards]
        # fixed reduction order keeps the result bit-identical per thread count
        return sum(f.result() for f in futures)


def cmd_tv(args):
    ctx = get_context(args.r)
    if args.cylinder:
        lat = load_lattice(args.cylinder)
        dual, edge_map = complex3.dual_triangulation(lat)
        pc = complex3.prism_complex(dual)
        order = [edge_map[e] for e in range(lat.n_edges)]
        M = tv_matrix(pc, ctx, edge_order=order, signed=args.signed)
        if args.out:
            write_matrix(args.out, M)
            print(f"wrote {M.shape[0]}x{M.shape[1]} matrix to {args.out}")
        print(f"trace {np.trace(M):.12g}")
        print(f"RESULT {_fmt(float(np.trace(M)))}")
        return 0
    tri = load_manifold(args.manifold)
    z = _sharded_tv(tri, ctx, args.threads, args.signed)
    print(f"Z_TV = {z:.12g}   (N3={tri.N3}, N1={tri.N1}, N0={tri.N0})")
    print(f"RESULT {_fmt(z)}")
    return 0


def cmd_spectrum(args):
    ctx = get_context(args.r)
    lat = load_lattice(args.lattice)
    e0, deg, gap = ground_degeneracy(lat, ctx)
    print(f"lattice: {lat}")
    print(f"ground energy   : {e0:.9f}")
    print(f"degeneracy      : {deg}")
    print(f"spectral gap    : {gap:.9f}")
    print(f"RESULT {e0:.12g} {deg}")
    return 0


def cmd_verify(args):
    ctx = get_context(args.r)
    lat = load_lattice(args.lattice)
    report = verify_projector_equals_tv(lat, ctx, tol=_tolerance(args))
    print(report)
    print(f"RESULT {'PASS' if report.passed else 'FAIL'} "
          f"{report.max_deviation:.3e}")
    return 0 if report.passed else 1


def write_matrix(path, M):
    """Dense text format: header `matrix R C`, then row-major complex pairs."""
    with open(path, "w") as fh:
        fh.write(f"matrix {M.shape[0]} {M.shape[1]}\n")
        for row in M:
            fh.write(" ".join(f"{np.real(x):.17g} {np.imag(x):.17g}"
                              for x in row))
            fh.write("\n")


def read_matrix(path):
    with open(path) as fh:
        header = fh.readline().split()
        if header[:1] != ["matrix"]:
            raise ValueError("missing matrix header")
        rows, cols = int(header[1]), int(header[2])
        M = np.zeros((rows, cols), dtype=complex)
        for i in range(rows):
            vals = list(map(float, fh.readline().split()))
            if len(vals) != 2 * cols:
                raise ValueError(f"row {i}: expected {2*cols} numbers")
            M[i] = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
    if np.abs(M.imag).max() == 0.0:
        return M.real
    return M


def build_parser():
    ap = argparse.ArgumentParser(
        prog="tvnet",
        description="Turaev-Viro state sums and Levin-Wen string nets "
                    "for SU(2)_q")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("q6j", help="q-6j symbols and identity checks")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--check", action="store_true",
                   help="run the pentagon/symmetry/orthogonality suite")
    p.add_argument("--all", action="store_true", help="print all nonzero symbols")
    p.add_argument("labels", nargs="*", type=parse_label)
    p.set_defaults(func=cmd_q6j)

    p = sub.add_parser("tv", help="Turaev-Viro invariants and cylinder matrices")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--manifold", help="census name or triangulation file")
    p.add_argument("--cylinder", help="lattice file or generator; computes the "
                                      "cylinder matrix over the dual surface")
    p.add_argument("--out", help="write the cylinder matrix to this file")
    p.add_argument("--signed", action="store_true",
                   help="use signed edge weights (-1)^{2j} d_j")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_tv)

    p = sub.add_parser("spectrum", help="string-net spectrum by exact "
                                        "diagonalization")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--lattice", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="check projector == TV cylinder matrix")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--lattice", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if getattr(args, "command", None) == "tv" and \
            not (args.manifold or args.cylinder):
        print("tv requires --manifold or --cylinder", file=sys.stderr)
        return 2
    if getattr(args, "r", 3) < 3:
        print("r must be >= 3", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
