"""Command line front end.

Exit codes: 0 success; ``iso`` returns 0/1/2 for Equivalent/NotEquivalent/
Unknown; 64 usage error; 65 data error; ``selftest`` returns 1 on failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import group
from .cohomology import Verdict, triples_equivalent
from .document import emit_triple, parse_triple
from .group import GroupElement, SkewTriple
from .nctorus import Character, canonical_trace_check, clock_shift_rep, fiber_form, parse_rational, trace_pairing
from .reconstruction import WindingUnstable, oracle_from_triple, recover_form

EX_USAGE = 64
EX_DATAERR = 65

VERDICT_EXIT = {Verdict.EQUIVALENT: 0, Verdict.NOT_EQUIVALENT: 1, Verdict.UNKNOWN: 2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _load(path: str) -> SkewTriple:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_triple(data)


def _element(t: SkewTriple, text: str) -> GroupElement:
    x = GroupElement.parse(text)
    if len(x.a) != t.m or len(x.b) != t.n:
        raise group.DimensionMismatch(f"element {text!r} needs {t.m} central and {t.n} other coordinates")
    return x


def _vector(text: str, n: int) -> tuple[int, ...]:
    v = tuple(int(p) for p in text.split(",")) if text.strip() else ()
    if len(v) != n:
        raise group.DimensionMismatch(f"vector {text!r} must have {n} entries")
    return v


def _matrix_json(M) -> str:
    return json.dumps([list(r) for r in M], separators=(",", ":"))


def cmd_validate(args):
    t = _load(args.file)
    print(f"ok m={t.m} n={t.n}")


def cmd_mul(args):
    t = _load(args.file)
    print(group.multiply(t, _element(t, args.x), _element(t, args.y)))


def cmd_inv(args):
    t = _load(args.file)
    print(group.inverse(t, _element(t, args.x)))


def cmd_comm(args):
    t = _load(args.file)
    print(group.commutator(t, _element(t, args.x), _element(t, args.y)))


def cmd_center(args):
    t = _load(args.file)
    lat = group.center_basis(t)
    print(f"rank {lat.rank}")
    for col in lat.columns():
        print(GroupElement(col[: t.m], col[t.m :]))


def cmd_ucs(args):
    print(",".join(map(str, group.upper_central_series(_load(args.file)))))


def cmd_class(args):
    print(group.nilpotency_class(_load(args.file)))


def cmd_canon(args):
    print(emit_triple(group.canonical_triple(_load(args.file))))


def cmd_iso(args):
    t1, t2 = _load(args.file1), _load(args.file2)
    v = triples_equivalent(t1, t2, args.budget)
    print(v)
    if v.witness is not None:
        print(f"phi_A {_matrix_json(v.witness[0])}")
        print(f"phi_B {_matrix_json(v.witness[1])}")
    return VERDICT_EXIT[v.tag]


def cmd_fiber(args):
    t = _load(args.file)
    form = fiber_form(t, Character.parse(args.chi))
    for row in form.entries:
        print(" ".join(str(x) for x in row))


def cmd_pairing(args):
    t = _load(args.file)
    chi = Character.parse(args.chi)
    print(trace_pairing(t, chi, _vector(args.b1, t.n), _vector(args.b2, t.n)))


def cmd_reconstruct(args):
    t = _load(args.file)
    noise = parse_rational(args.noise) if args.noise is not None else None
    oracle = oracle_from_triple(t, scramble_seed=args.scramble, noise=noise)
    rec = recover_form(oracle, tol=args.tol)
    print(emit_triple(rec.form))
    for d in rec.diagnostics:
        print(f"k={d.k} i={d.i} j={d.j} winding={d.winding} samples={d.samples} residual={d.residual:.3e}")


def cmd_clockshift(args):
    rep = clock_shift_rep(parse_rational(args.theta))
    q = rep.q
    worst = max(
        canonical_trace_check(rep, (b1, b2))
        for b1 in range(-2 * q, 2 * q + 1)
        for b2 in range(-2 * q, 2 * q + 1)
    )
    print(f"theta={rep.theta} q={q}")
    print(f"commutator_residual={rep.commutator_residual():.3e}")
    print(f"max_trace_residual={worst:.3e}")


def cmd_selftest(args):
    from .acceptance import run_all

    return 0 if run_all() else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="twostep", description="Torsion-free 2-step nilpotent groups and their C*-bundles.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, *files):
        sp = sub.add_parser(name, help=help)
        for f in files:
            sp.add_argument(f, metavar=f.upper())
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "check a triple document", "file")
    sp = add("mul", cmd_mul, "multiply two elements 'a1,..;b1,..'", "file")
    sp.add_argument("x")
    sp.add_argument("y")
    sp = add("inv", cmd_inv, "invert an element", "file")
    sp.add_argument("x")
    sp = add("comm", cmd_comm, "commutator x y x^-1 y^-1", "file")
    sp.add_argument("x")
    sp.add_argument("y")
    add("center", cmd_center, "basis of the centre", "file")
    add("ucs", cmd_ucs, "upper central series subquotient ranks", "file")
    add("class", cmd_class, "nilpotency class", "file")
    add("canon", cmd_canon, "canonical triple (Z(G), G/Z(G), omega_G)", "file")
    sp = add("iso", cmd_iso, "decide equivalence of two triples", "file1", "file2")
    sp.add_argument("--budget", type=int, default=8)
    sp = add("fiber", cmd_fiber, "fibre form at a character", "file")
    sp.add_argument("--chi", required=True)
    sp = add("pairing", cmd_pairing, "trace pairing of two K_1 classes", "file")
    sp.add_argument("--chi", required=True)
    sp.add_argument("--b1", required=True)
    sp.add_argument("--b2", required=True)
    sp = add("reconstruct", cmd_reconstruct, "recover the form from an oracle", "file")
    sp.add_argument("--scramble", type=int, default=None)
    sp.add_argument("--noise", default=None, help="noise amplitude P/Q, below 1/8")
    sp.add_argument("--tol", type=float, default=1e-6)
    sp = add("clockshift", cmd_clockshift, "clock-shift realisation of a rational fibre")
    sp.add_argument("--theta", required=True)
    add("selftest", cmd_selftest, "run the acceptance suite")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or 0
    except UsageError as exc:
        print(f"twostep: {exc}", file=sys.stderr)
        return EX_USAGE
    except (ValueError, WindingUnstable, ZeroDivisionError) as exc:
        print(f"twostep: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EX_DATAERR


if __name__ == "__main__":
    sys.exit(main())
