"""Command-line front end: ``padlocks <command> ...``.

Exit codes: 0 success (a false verdict is still a success, reported in the
JSON), 1 when a run cannot complete (capacity/budget/integrity), 2 on usage
or malformed input.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from pathlib import Path

from . import bounds, constructions, knots, sharing
from .errors import CapacityError, IntegrityError, SchemaError
from .model import dumps, emit_system, parse_system, realized_access_structure
from .verify import verify_threshold

SCHEMES = ("direct", "two", "daisy", "dnf", "cnf", "benaloh", "weighted", "bose", "fixture13", "recursive")


class UsageError(Exception):
    pass


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for this command")


def _ints(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _write(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


def _read_system(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    return parse_system(text.strip().splitlines()[0] if text.strip() else text)


def _build(args):
    """Return ``(system, declared threshold or None)``."""
    s = args.scheme
    if s == "direct":
        _need(args, "k", "n")
        return constructions.build_direct(args.k, args.n), args.k
    if s == "two":
        _need(args, "n")
        return constructions.build_2_of_n(args.n), 2
    if s == "daisy":
        _need(args, "n")
        return constructions.build_double_daisy(args.n), 2
    if s == "bose":
        _need(args, "n")
        return constructions.build_3_of_n(args.n), 3
    if s == "fixture13":
        return constructions.fixture_13_participants(args.n or 13), 3
    if s == "recursive":
        _need(args, "k", "n")
        return constructions.build_recursive(args.k, args.n), args.k
    if s == "benaloh":
        return constructions.build_benaloh(), None
    if s == "weighted":
        _need(args, "weights", "W")
        return constructions.build_weighted(_ints(args.weights), args.W), None
    _need(args, "formula")
    f = constructions.parse_formula(args.formula, s.upper())
    return constructions.formula_system(f), None


def cmd_construct(args) -> int:
    system, k = _build(args)
    _write(args, emit_system(system))
    if args.verify:
        if k is None:
            access = realized_access_structure(system, args.limit)
            print(dumps({"minimal_authorized": [list(s) for s in access.minimal_authorized], "padlocks": system.padlocks}))
        else:
            print(dumps(verify_threshold(system, k, args.limit).to_json()))
    return 0


def cmd_verify(args) -> int:
    _need(args, "system", "k")
    system = _read_system(args.system)
    print(dumps(verify_threshold(system, args.k, args.limit).to_json()))
    return 0


def cmd_bounds(args) -> int:
    _need(args, "k", "n")
    print(dumps(bounds.best_known(args.k, args.n).to_json()))
    return 0


def cmd_table(args) -> int:
    if args.k is not None and args.n_max is not None:
        pairs = [(args.k, n) for n in range(max(args.k, 2), args.n_max + 1)]
    elif args.n is not None and args.k_max is not None:
        pairs = [(k, args.n) for k in range(1, min(args.k_max, args.n) + 1)]
    else:
        raise UsageError("table needs --k with --n-max, or --n with --k-max")
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["k", "n", "lower", "upper", "lower_witnesses", "upper_witness"])
    for k, n in pairs:
        r = bounds.best_known(k, n)
        out.writerow([k, n, r.lower, r.upper, ";".join(r.lower_witnesses), r.upper_witness])
    return 0


def cmd_knot(args) -> int:
    if args.build:
        k, n = args.build
        word = knots.build_knot(k, n)
        _write(args, knots.format_word(word))
        return 0
    if args.verify:
        _need(args, "k", "n")
        try:
            word = knots.parse_word(Path(args.verify).read_text(), args.n)
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        print(dumps(knots.verify_knot_threshold(word, args.k, args.n, args.limit).to_json()))
        return 0
    if args.search:
        k, n, max_len = args.search
        result = knots.search_minimal(k, n, max_len)
        if result is None:
            print(dumps({"length": None, "word": None}))
        else:
            print(dumps({"length": result.length, "word": knots.format_word(result.word), "nodes": result.nodes}))
        return 0
    raise UsageError("knot needs one of --build, --verify, --search")


def cmd_share(args) -> int:
    _need(args, "system", "secret")
    system = _read_system(args.system)
    q = args.q if args.q is not None else sharing.min_field_size(system.circuit)
    rng = random.Random(args.seed)
    dealing = sharing.deal(system.circuit, args.secret, q, rng)
    _write(args, dumps(sharing.shares_to_json(system.circuit, dealing)))
    return 0


def cmd_reconstruct(args) -> int:
    _need(args, "system", "shares", "coalition")
    system = _read_system(args.system)
    try:
        obj = json.loads(Path(args.shares).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {args.shares}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON in {args.shares}: {exc}") from exc
    q, h, shares = sharing.shares_from_json(obj)
    if h != sharing.circuit_hash(system.circuit):
        raise SchemaError("$.circuit_hash", "shares were dealt for a different circuit")
    coalition = _ints(args.coalition)
    opened = set()
    for p in coalition:
        if not 0 <= p < system.n:
            raise UsageError(f"participant {p} out of range 0..{system.n - 1}")
        opened |= system.keys[p]
    secret = sharing.reconstruct(system.circuit, {pid: shares.get(pid, []) for pid in opened}, q)
    print(dumps({"coalition": coalition, "opened": secret is not None, "secret": secret}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="padlocks", description="Build, verify and bound padlock threshold systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--k", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--limit", type=int, default=None, help="enumeration limit on n (default 20)")
        sp.add_argument("--out", help="write the main artifact to this file")
        return sp

    c = common(sub.add_parser("construct", help="build a system and print its JSON"))
    c.add_argument("--scheme", choices=SCHEMES, required=True)
    c.add_argument("--formula")
    c.add_argument("--weights")
    c.add_argument("--W", type=int)
    c.add_argument("--verify", action="store_true")
    c.set_defaults(func=cmd_construct)

    v = common(sub.add_parser("verify", help="brute-force threshold check of a system file"))
    v.add_argument("--system")
    v.set_defaults(func=cmd_verify)

    b = common(sub.add_parser("bounds", help="lower/upper bounds on the padlock count"))
    b.set_defaults(func=cmd_bounds)

    t = common(sub.add_parser("table", help="CSV of bounds over a range"))
    t.add_argument("--n-max", type=int)
    t.add_argument("--k-max", type=int)
    t.set_defaults(func=cmd_table)

    k = common(sub.add_parser("knot", help="knotted (free-group) systems"))
    k.add_argument("--build", nargs=2, type=int, metavar=("K", "N"))
    k.add_argument("--verify", metavar="FILE")
    k.add_argument("--search", nargs=3, type=int, metavar=("K", "N", "MAX_LEN"))
    k.add_argument("--max-len", type=int)
    k.set_defaults(func=cmd_knot)

    s = common(sub.add_parser("share", help="deal shares of a secret over a system"))
    s.add_argument("--system")
    s.add_argument("--secret", type=int)
    s.add_argument("--q", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_share)

    r = common(sub.add_parser("reconstruct", help="recover the secret from a coalition's shares"))
    r.add_argument("--system")
    r.add_argument("--shares")
    r.add_argument("--coalition")
    r.set_defaults(func=cmd_reconstruct)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CapacityError, IntegrityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


run = main

if __name__ == "__main__":
    sys.exit(main())
