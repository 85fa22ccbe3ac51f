"""Command-line front end.

Exit status: 0 success, 1 usage error, 2 invalid input, 3 contextuality
witnessed (``check`` only), 4 derived set differs from the requested golden
set (``derive --golden`` only).
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .bellmap import BellError, bell_to_mesd, mesd_to_bell, pairing_values, table_correlators
from .exactgeom import equivalent, make_equalities_explicit
from .ncmodels import derive_nc_inequalities, load_golden, nc_feasible
from .quantum import QuantumError, noise_curve, quantum_table, tradeoff_curve
from .scenario import DataTable, SymmetricSummary, TableError, extract_symmetric, is_symmetric
from .secondary import PrimarySet, SecondaryError, optimize_alternating

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_CONTEXTUAL, EXIT_GOLDEN = 0, 1, 2, 3, 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


class InputError(ValueError):
    """Unreadable or invalid input file."""


def _header(name: str, **params) -> str:
    args = " ".join(f"{k}={v}" for k, v in params.items())
    return f"# ncmesd {__version__} {name} {args}".rstrip() + "\n"


def _csv(rows, columns) -> str:
    out = io.StringIO()
    out.write(",".join(columns) + "\n")
    for r in rows:
        out.write(",".join(repr(float(x)) for x in r) + "\n")
    return out.getvalue()


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _number(text: str):
    """Exact for integers, fractions and decimals; float otherwise."""
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def _set_pairs(items) -> dict:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise _UsageError(f"--set expects name=value, got {item!r}")
        out[name.strip()] = Fraction(value.strip())
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_derive(args, out):
    system = derive_nc_inequalities(args.mode, args.labeling, args.pruned)
    values = _set_pairs(args.set)
    unknown = set(values) - set(system.variables)
    if unknown:
        raise InputError(f"--set names unknown variables {sorted(unknown)}")
    if values:
        system = make_equalities_explicit(system.substitute(values))
    text = json.dumps(system.to_json(), indent=2) + "\n" if args.format == "json" else system.to_text()
    out.write(text)
    if args.golden:
        golden = load_golden(args.golden)
        if set(golden.constraints) == set(system.constraints):
            print(f"matches golden set {args.golden} exactly", file=sys.stderr)
        elif equivalent(golden, system):
            print(f"equivalent to golden set {args.golden}", file=sys.stderr)
        else:
            extra = set(system.constraints) - set(golden.constraints)
            missing = set(golden.constraints) - set(system.constraints)
            for c in sorted(map(str, missing)):
                print(f"missing: {c}", file=sys.stderr)
            for c in sorted(map(str, extra)):
                print(f"extra: {c}", file=sys.stderr)
            return EXIT_GOLDEN
    return EXIT_OK


def cmd_check(args, out):
    try:
        table = DataTable.from_json(_read_json(args.table))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid table: {exc}") from exc
    verdict = nc_feasible(table)
    if verdict.feasible:
        out.write("noncontextual model exists\n")
        return EXIT_OK
    out.write("no noncontextual model: violated inequalities\n")
    for c in verdict.violated:
        out.write(f"  {c}\n")
    return EXIT_CONTEXTUAL


def cmd_quantum_table(args, out):
    table = quantum_table(args.confusability, args.epsilon, args.depolarize)
    data = table.to_json()
    if is_symmetric(table):
        x = extract_symmetric(table)
        data["summary"] = {k: float(v) for k, v in x.as_dict().items()}
    out.write(json.dumps(data, indent=2) + "\n")
    return EXIT_OK


def cmd_tradeoff(args, out):
    rows = tradeoff_curve(args.epsilon, args.steps)
    out.write(_header("tradeoff", eps=args.epsilon, steps=args.steps))
    out.write(_csv(rows, ("c", "s_nc", "s_q")))
    return EXIT_OK


def cmd_noise_curve(args, out):
    rows = noise_curve(args.steps)
    out.write(_header("noise-curve", steps=args.steps))
    out.write(_csv(rows, ("theta", "v_max")))
    return EXIT_OK


def cmd_secondary(args, out):
    try:
        primaries = PrimarySet.from_json(_read_json(args.primaries))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid primary set: {exc}") from exc
    sol = optimize_alternating(primaries, args.rounds)
    out.write(json.dumps(sol.to_json(), indent=2) + "\n")
    return EXIT_OK


def cmd_bell(args, out):
    if args.table is not None:
        try:
            table = DataTable.from_json(_read_json(args.table))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"invalid table: {exc}") from exc
        b = table_correlators(table.rows)
    else:
        if None in (args.s, args.c, args.eps):
            raise _UsageError("bell needs a table file or all of --s, --c, --eps")
        b = mesd_to_bell(SymmetricSummary(_number(args.s), _number(args.c), _number(args.eps)))

    def enc(x):
        return str(x) if isinstance(x, Fraction) else float(x)

    data = b.to_json()
    data["chsh"] = {f"{j},{k}": enc(v) for (j, k), v in pairing_values(b).items()}
    data["local"] = all(v <= 2 for v in pairing_values(b).values())
    with contextlib.suppress(BellError):
        data["summary"] = {k: enc(v) for k, v in bell_to_mesd(b).summary.as_dict().items()}
    out.write(json.dumps(data, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ncmesd", description="Noncontextuality bounds for minimum-error state discrimination.")
    p.add_argument("--version", action="version", version=f"ncmesd {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("derive", help="derive noncontextuality inequalities by exact projection")
    d.add_argument("--mode", choices=("symmetric", "full"), default="symmetric",
                   help="(s, c, eps) with the symmetries, or the nine free parameters without them")
    d.add_argument("--labeling", action="store_true", help="impose eps <= c <= 1 - eps for every pair")
    d.add_argument("--pruned", action="store_true",
                   help="use the six ontic vertices that remain when the discriminating measurement is optimal")
    d.add_argument("--golden", metavar="NAME", help="compare with a vendored set (e.g. appendixD); exit 4 on mismatch")
    d.add_argument("--set", action="append", metavar="VAR=VALUE",
                   help="fix a variable to a rational value after projection (repeatable)")
    d.add_argument("--format", choices=("text", "json"), default="text",
                   help="text: one inequality per line with p/q rationals; json: {vars, cons}")
    d.add_argument("-o", "--output", help="write here instead of stdout")
    d.set_defaults(func=cmd_derive)

    c = sub.add_parser("check", help="decide whether a data table admits a noncontextual model (exit 3 if not)")
    c.add_argument("table", help='JSON {"rows": 3x4 entries (numbers or "p/q"), "equivalence": true}')
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_check)

    q = sub.add_parser("quantum-table", help="data table of the noisy qubit model as JSON")
    q.add_argument("--confusability", type=float, required=True, help="c")
    q.add_argument("--epsilon", type=float, default=0.0, help="eps (default 0)")
    q.add_argument("--depolarize", type=float, default=0.0, metavar="V", help="depolarizing noise v (default 0)")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_quantum_table)

    t = sub.add_parser("tradeoff", help="CSV columns c, s_nc (noncontextual bound), s_q (qubit model)")
    t.add_argument("--epsilon", type=float, default=0.0)
    t.add_argument("--steps", type=int, default=100, help="number of intervals on [eps, 1 - eps]")
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_tradeoff)

    n = sub.add_parser("noise-curve", help="CSV columns theta (radians), v_max (largest violating noise)")
    n.add_argument("--steps", type=int, default=180, help="number of intervals on [0, pi]")
    n.add_argument("-o", "--output")
    n.set_defaults(func=cmd_noise_curve)

    s = sub.add_parser("secondary", help="optimize secondary procedures over primary preparations and effects")
    s.add_argument("primaries", help='JSON {"states": [{"x","z"}], "effects": [{"alpha","ax","az"}]} or {"statistics": [[...]]}')
    s.add_argument("--rounds", type=int, default=10, help="alternation rounds (default 10)")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_secondary)

    b = sub.add_parser("bell", help="correlators and CHSH values of the equivalent Bell scenario")
    b.add_argument("table", nargs="?", help="data table JSON (as for check)")
    b.add_argument("--s")
    b.add_argument("--c")
    b.add_argument("--eps")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bell)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if getattr(args, "rounds", 1) < 1 or getattr(args, "steps", 1) < 1:
        print("ncmesd: error: --rounds and --steps must be positive", file=sys.stderr)
        return EXIT_USAGE
    buf = io.StringIO()
    try:
        if args.output:
            # fail before computing if the destination is not writable
            open(args.output, "a", encoding="utf-8").close()
        status = args.func(args, buf)
    except _UsageError as exc:
        print(f"ncmesd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, TableError, QuantumError, SecondaryError, BellError, OSError, ValueError) as exc:
        print(f"ncmesd: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
