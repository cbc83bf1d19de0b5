"""Command line front end: ``python -m grcdmm <command> ...``.

Exit codes: 0 success, 1 verification or decoding failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys

import numpy as np

from .errors import CdmmError, InsufficientResponses, VerificationFailed
from .experiment import ExperimentConfig, resolve_seed, run_experiment
from .matfile import read_matrix, write_matrix
from .rmfe import build_rmfe
from .ring import all_elements, exceptional_set, make_extension, make_ring

PREFIX_LIMIT = 8
EXHAUSTIVE_LIMIT = 2**20


class UsageError(Exception):
    pass


def _ring_args(parser, required=True, defaults=(None, None, None)):
    parser.add_argument("--p", type=int, required=required, default=defaults[0])
    parser.add_argument("--e", type=int, required=required, default=defaults[1])
    parser.add_argument("--d", type=int, required=required, default=defaults[2])


def build_parser():
    parser = argparse.ArgumentParser(prog="grcdmm", description="Coded distributed matrix multiplication over Galois rings.")
    sub = parser.add_subparsers(dest="command", required=True)

    info = sub.add_parser("ring-info", help="modulus and exceptional points of GR(p^e, d)")
    _ring_args(info)
    info.add_argument("--m", type=int, help="also describe the degree-m extension")

    check = sub.add_parser("rmfe-check", help="test psi(phi(x) phi(y)) = x * y")
    _ring_args(check)
    check.add_argument("--n", type=int, required=True)
    check.add_argument("--m", type=int, required=True)
    check.add_argument("--infinity", action="store_true", help="put the last slot at infinity")
    check.add_argument("--exhaustive", action="store_true", help="all input pairs instead of random ones")
    check.add_argument("--samples", type=int, default=10_000)
    check.add_argument("--seed", type=int)

    run = sub.add_parser("run", help="simulate one scheme end to end and print metrics JSON")
    run.add_argument("--scheme", required=True, choices=["plain", "rmfe-i", "rmfe-ii", "batch", "matdot", "poly"])
    _ring_args(run, required=False)
    for name in ("t", "r", "s"):
        run.add_argument(f"--{name}", type=int)
    for name in ("u", "v", "w"):
        run.add_argument(f"--{name}", type=int)
    run.add_argument("--N", type=int, required=True)
    run.add_argument("--m", type=int)
    run.add_argument("--n", type=int)
    run.add_argument("--levels", type=int, default=1, choices=[1, 2])
    run.add_argument("--m-inner", type=int, help="inner extension degree for two-level rmfe-ii")
    run.add_argument("--batch-size", type=int)
    run.add_argument("--straggler-prob", type=float, default=0.0)
    run.add_argument("--jitter", type=float, default=0.0)
    run.add_argument("--seed", type=int)
    run.add_argument("--repeat", type=int, default=1)
    run.add_argument("--verify", action="store_true")
    run.add_argument("--packed-sum", action="store_true", help="rmfe-i: sum slots before unpacking")
    run.add_argument("--in-a", metavar="FILE")
    run.add_argument("--in-b", metavar="FILE")
    run.add_argument("--out", metavar="FILE", help="metrics JSON (default: stdout)")

    gen = sub.add_parser("gen", help="write a seeded random matrix file")
    gen.add_argument("--rows", type=int, required=True)
    gen.add_argument("--cols", type=int, required=True)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--out", required=True)
    _ring_args(gen, required=False, defaults=(2, 64, 1))
    return parser


def _prefix(ring, count):
    T = exceptional_set(ring, min(count, ring.residue_size))
    return "[" + ", ".join(str(x) for x in T) + "]"


def cmd_ring_info(args, out):
    ring = make_ring(args.p, args.e, args.d)
    print(f"ring: {ring!r}", file=out)
    print(f"modulus: {ring.format_modulus()}", file=out)
    print(f"residue field: GF({ring.p}^{ring.d}), {ring.residue_size} elements", file=out)
    print(f"exceptional prefix: {_prefix(ring, PREFIX_LIMIT)}", file=out)
    if args.m:
        ext = make_extension(ring, args.m)
        print(f"extension: {ext!r}", file=out)
        print(f"extension modulus: {ext.format_modulus('y')}", file=out)
        print(f"extension exceptional prefix: {_prefix(ext, PREFIX_LIMIT)}", file=out)
    return 0


def cmd_rmfe_check(args, out):
    base = make_ring(args.p, args.e, args.d)
    scheme = build_rmfe(base, args.n, args.m, args.infinity)
    if args.exhaustive:
        count = len(all_elements(base)) ** args.n
        if count * count > EXHAUSTIVE_LIMIT:
            raise UsageError(f"{count * count} pairs is too many for --exhaustive")
        elems = all_elements(base)
        vecs = np.stack([np.stack(v) for v in itertools.product(elems, repeat=args.n)])
        xs = np.moveaxis(vecs, 1, 0)
        X = xs[:, :, None]
        Y = xs[:, None, :]
    else:
        rng = np.random.default_rng(resolve_seed(args.seed))
        X = base.random((args.n, args.samples), rng)
        Y = base.random((args.n, args.samples), rng)
    got = scheme.psi(scheme.ext.mul(scheme.phi(X), scheme.phi(Y)))
    want = base.mul(X, Y)
    ok = np.all(got == np.broadcast_to(want, got.shape), axis=(0,) + tuple(range(got.ndim - base.elem_ndim, got.ndim)))
    passed, total = int(ok.sum()), int(ok.size)
    print(f"{scheme!r}: {passed}/{total} pairs pass", file=out)
    return 0 if passed == total else 1


def _read_input(path, args):
    ring, M = read_matrix(path)
    for name in ("p", "e", "d"):
        given = getattr(args, name)
        if given is not None and given != getattr(ring, name):
            raise UsageError(f"--{name} {given} disagrees with {path} ({name} = {getattr(ring, name)})")
    return ring, M


def cmd_run(args, out):
    A = B = None
    p, e, d = args.p, args.e, args.d
    t, r, s = args.t, args.r, args.s
    if args.in_a or args.in_b:
        if not (args.in_a and args.in_b):
            raise UsageError("--in-a and --in-b go together")
        if args.scheme == "batch":
            raise UsageError("the batch scheme takes seeded random inputs only")
        ring_a, A = _read_input(args.in_a, args)
        ring_b, B = _read_input(args.in_b, args)
        if ring_a != ring_b:
            raise UsageError("input matrices live in different rings")
        p, e, d = ring_a.p, ring_a.e, ring_a.d
        dims = (A.shape[0], A.shape[1], B.shape[1])
        if A.shape[1] != B.shape[0]:
            raise UsageError(f"inner dimensions differ: {A.shape[1]} vs {B.shape[0]}")
        for name, given, actual in zip("trs", (t, r, s), dims):
            if given is not None and given != actual:
                raise UsageError(f"--{name} {given} disagrees with the input files ({actual})")
        t, r, s = dims
    if None in (t, r, s):
        raise UsageError("--t, --r and --s are required without input files")
    config = ExperimentConfig(
        scheme=args.scheme, t=t, r=r, s=s, N=args.N,
        p=2 if p is None else p, e=64 if e is None else e, d=1 if d is None else d,
        u=args.u, v=args.v, w=args.w, m=args.m, n=args.n, levels=args.levels, m_inner=args.m_inner,
        batch_size=args.batch_size, straggler_prob=args.straggler_prob, jitter=args.jitter,
        seed=args.seed, repeat=args.repeat, verify=args.verify, packed_sum=args.packed_sum)
    try:
        # bad parameter combinations are usage errors, not run failures
        config.single_config().ep
    except (CdmmError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    result = run_experiment(config, A, B)
    text = json.dumps(result.to_dict(), indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=out)
    return 0


def cmd_gen(args, out):
    ring = make_ring(args.p, args.e, args.d)
    rng = np.random.default_rng(resolve_seed(args.seed))
    write_matrix(args.out, ring, ring.random((args.rows, args.cols), rng))
    return 0


COMMANDS = {"ring-info": cmd_ring_info, "rmfe-check": cmd_rmfe_check, "run": cmd_run, "gen": cmd_gen}


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return COMMANDS[args.command](args, out)
    except (VerificationFailed, InsufficientResponses) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, CdmmError, ValueError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
