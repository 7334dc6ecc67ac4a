"""The ``qspace`` command.

Exit codes: 0 success, 1 a verification check failed (the counterexample is
printed), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import checks, fock
from .fock import FockVector, particle_kind
from .qset_kernel import (
    QSet,
    QSetError,
    identical,
    indistinguishable,
    is_classical,
    m_atom,
    permutation_swap,
    weak_singleton,
)
from .statistics import DEFAULT_CAP, CapExceeded, StatisticsKind, count_microstates, enumerate_microstates, state_letter


class UsageError(Exception):
    pass


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _natural(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _load_json(source: str):
    """Read JSON from a file path, ``-`` for stdin, or an inline JSON literal."""
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith(("{", "[")):
        text = source
    else:
        text = Path(source).read_text()
    return json.loads(text)


def _emit(text: str, out: str | None = None):
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# stats
# ---------------------------------------------------------------------------


def _describe_microstate(kind: StatisticsKind, state) -> str:
    if kind is StatisticsKind.MB:
        return " and ".join(f"{state_letter(s)}({p + 1})" for p, s in enumerate(state)) or "(empty)"
    parts = [f"{state_letter(i)}({'*' * n})" for i, n in enumerate(state) if n]
    return " and ".join(parts) or "(empty)"


def cmd_stats(args) -> int:
    kind = StatisticsKind.parse(args.kind)
    count = count_microstates(kind, args.particles, args.levels)
    states = enumerate_microstates(kind, args.particles, args.levels, cap=args.cap) if args.enumerate else None
    probability = f"1/{count}" if count else None
    if args.json:
        print(json.dumps({"count": count, "microstates": [list(s) for s in states] if states is not None else None,
                          "probability": probability}))
        return 0
    print(f"{kind.value.upper()} statistics: N={args.particles} particles over C={args.levels} states")
    print(f"count: {count}")
    print(f"probability: {probability if probability else 'n/a (no microstates)'}")
    if states is not None:
        for k, s in enumerate(states, 1):
            print(f"  {k}. {_describe_microstate(kind, s)}")
    return 0


# ---------------------------------------------------------------------------
# state
# ---------------------------------------------------------------------------


def _read_vector(source, kind_flag):
    kind, v = fock.vector_from_json(_load_json(source))
    if kind_flag is not None:
        kind = particle_kind(kind_flag)
    return kind, v


def cmd_state(args) -> int:
    if args.action == "check-commutators":
        return cmd_check_commutators(args)
    if not args.inputs:
        raise UsageError("state commands need --in FILE")
    kind, v = _read_vector(args.inputs[0], args.kind)
    if args.action == "inner":
        if len(args.inputs) > 2:
            raise UsageError("inner takes at most two --in vectors")
        w = _read_vector(args.inputs[1], args.kind)[1] if len(args.inputs) == 2 else v
        ip = fock.inner(kind, v, w)
        if args.json:
            _emit(json.dumps({"kind": kind, "inner": [ip.real, ip.imag]}), args.out)
        else:
            _emit(f"inner ({kind}) = {ip.real:.12g}{ip.imag:+.12g}j", args.out)
        return 0
    if args.action == "norm":
        value = fock.norm(kind, v)
        null = fock.is_null_norm(kind, v)
        if args.json:
            _emit(json.dumps({"kind": kind, "norm": value, "null_norm": null}), args.out)
        else:
            _emit(f"norm ({kind}) = {value:.12g}" + ("  [null norm]" if null else ""), args.out)
        return 0
    # apply
    if args.level is None:
        raise UsageError("state apply needs --level")
    op = {"create": fock.create, "annihilate": fock.annihilate, "number": fock.number}[args.op]
    result = op(kind, args.level, v)
    if kind == fock.FERMION and args.canonical:
        result = fock.fermion_canonical(result)
    _emit(fock.dumps_vector(kind, result), args.out)
    return 0


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def _report(title: str, report: checks.SweepReport, as_json: bool, extra: dict) -> int:
    if as_json:
        print(json.dumps({**extra, "cases": report.cases, "tolerance": report.tol,
                          "max_residual": report.max_residual, "failures": report.failures[:20],
                          "ok": report.ok}))
    else:
        print(title)
        print(f"cases checked: {report.cases}")
        for name, value in report.max_residual.items():
            print(f"  {name:<12} max residual {value:.3e}")
        for fail in report.failures[:20]:
            print("FAIL " + ", ".join(f"{k}={v}" for k, v in fail.items()))
        print("OK" if report.ok else f"FAILED ({len(report.failures)} failing cases)")
    return 0 if report.ok else 1


def cmd_check_commutators(args) -> int:
    kind = particle_kind(args.kind or "boson")
    report = checks.commutator_sweep(kind, args.levels, args.max_occ, tol=args.tol,
                                     random_vectors=args.random, seed=args.seed)
    title = f"{kind} (anti)commutators on {args.levels} levels, max occupation {args.max_occ}, tol {args.tol:g}"
    return _report(title, report, args.json, {"kind": kind, "levels": args.levels, "max_occ": args.max_occ})


def cmd_check_oracle(args) -> int:
    report = checks.oracle_sweep(args.levels, args.max_len)
    title = f"inner products vs permutation-sum oracle, {args.levels} levels, words up to length {args.max_len}"
    return _report(title, report, args.json, {"levels": args.levels, "max_len": args.max_len})


def cmd_demo_permutation(args) -> int:
    report = checks.permutation_demo(args.max_total, args.kinds)
    title = f"permutation swaps over m-multisets with total <= {args.max_total}, {args.kinds} kinds"
    return _report(title, report, args.json, {"max_total": args.max_total, "kinds": args.kinds})


# ---------------------------------------------------------------------------
# qset
# ---------------------------------------------------------------------------


def _read_qset(source) -> QSet:
    return QSet.from_json(_load_json(source))


def cmd_qset(args) -> int:
    if args.action == "inspect":
        q = _read_qset(args.qsets[0])
        info = {"qset": q.to_json(), "qcard": q.qcard, "classical": is_classical(q), "kinds": q.m_part}
        if args.json:
            print(json.dumps(info))
        else:
            print(f"q-set: {q!r}")
            print(f"quasi-cardinal: {q.qcard}")
            print(f"classical: {'yes' if info['classical'] else 'no'}")
        return 0
    if args.action == "compare":
        if len(args.qsets) != 2:
            raise UsageError("qset compare needs two q-sets")
        a, b = (_read_qset(s) for s in args.qsets)
        same = indistinguishable(a, b)
        try:
            ident = identical(a, b)
        except QSetError:
            ident = None
        if args.json:
            print(json.dumps({"indistinguishable": same, "identical": ident}))
        else:
            print(f"indistinguishable: {'yes' if same else 'no'}")
            print(f"identical: {'undefined (m-atoms involved)' if ident is None else ('yes' if ident else 'no')}")
        return 0
    if args.action == "weak-singleton":
        if not args.atom_kind:
            raise UsageError("qset weak-singleton needs --kind")
        z = _read_qset(args.qsets[0])
        print(json.dumps(weak_singleton(m_atom(args.atom_kind), z).to_json()))
        return 0
    # swap
    if not args.atom_kind or not args.pool:
        raise UsageError("qset swap needs --kind and --pool")
    x = _read_qset(args.qsets[0])
    t = _read_qset(args.pool)
    y = permutation_swap(x, args.atom_kind, t)
    if args.json:
        print(json.dumps({"result": y.to_json(), "indistinguishable_from_input": indistinguishable(x, y)}))
    else:
        print(f"result: {y!r}")
        print(f"indistinguishable from input: {'yes' if indistinguishable(x, y) else 'no'}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_check_commutator_args(p, require_kind=True):
    p.add_argument("--kind", choices=["boson", "fermion"], required=require_kind)
    p.add_argument("--levels", type=_positive_int, default=4)
    p.add_argument("--max-occ", type=_natural, default=4)
    p.add_argument("--tol", type=_positive_float, default=1e-9)
    p.add_argument("--random", type=_natural, default=20, help="seeded random superpositions to add")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qspace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="MB/BE/FD microstate counts")
    p.add_argument("--kind", required=True, choices=["mb", "be", "fd"])
    p.add_argument("--particles", type=_natural, required=True)
    p.add_argument("--levels", type=_positive_int, required=True)
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--cap", type=_positive_int, default=DEFAULT_CAP)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("state", help="operate on Fock vectors stored as JSON")
    p.add_argument("action", choices=["inner", "apply", "norm", "check-commutators"])
    p.add_argument("--kind", choices=["boson", "fermion"])
    p.add_argument("--in", dest="inputs", action="append", default=[], metavar="FILE")
    p.add_argument("--out")
    p.add_argument("--op", choices=["create", "annihilate", "number"], default="create")
    p.add_argument("--level", type=_natural)
    p.add_argument("--canonical", action="store_true", help="drop null-norm terms from fermionic results")
    p.add_argument("--levels", type=_positive_int, default=4)
    p.add_argument("--max-occ", type=_natural, default=4)
    p.add_argument("--tol", type=_positive_float, default=1e-9)
    p.add_argument("--random", type=_natural, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("check-commutators", help="sweep the (anti)commutation relations")
    _add_check_commutator_args(p)
    p.set_defaults(func=cmd_check_commutators)

    p = sub.add_parser("check-oracle", help="compare inner products with the permutation-sum oracle")
    p.add_argument("--levels", type=_positive_int, default=4)
    p.add_argument("--max-len", type=_natural, default=4)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check_oracle)

    p = sub.add_parser("demo-permutation", help="unobservability of permutations, exhaustively")
    p.add_argument("--max-total", type=_natural, default=5)
    p.add_argument("--kinds", type=_positive_int, default=3)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_demo_permutation)

    p = sub.add_parser("qset", help="inspect quasi-sets given as JSON")
    p.add_argument("action", choices=["inspect", "compare", "swap", "weak-singleton"])
    p.add_argument("qsets", nargs="+", metavar="QSET", help="file, '-' or inline JSON")
    p.add_argument("--kind", dest="atom_kind")
    p.add_argument("--pool")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_qset)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, TypeError, QSetError, fock.FockError, CapExceeded, OSError) as exc:
        print(f"qspace: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
