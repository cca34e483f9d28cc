"""Command-line front end.

Exit status: 0 success, 2 bad arguments, 3 non-fundamental discriminant,
4 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import census as census_mod
from .constants import (
    DEFAULT_DEPTH,
    DEFAULT_PRIME_BOUND,
    METHODS,
    bernays_constant,
    genus_sum_check,
    reports_to_csv,
)
from .data import TABLE
from .errors import BernaysError, InvalidDiscriminantError
from .forms import QuadraticForm, genus_partition, principal_form
from .lfunc import DEFAULT_EVEN_PRIME_BOUND
from .search import scan

EXIT_OK, EXIT_USAGE = 0, 2


def _threads() -> int:
    return max(1, int(os.environ.get("BERNAYS_THREADS", "1")))


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(t)) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _number(text: str) -> int:
    """Integers, also written like 1e8."""
    try:
        value = float(text) if any(ch in text for ch in "eE.") else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if value != int(value):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _form(text: str) -> QuadraticForm:
    try:
        return QuadraticForm.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"form must look like a,b,c; got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("human", "json", "csv"), default="human")
    common.add_argument("--prime-bound", type=_number, default=DEFAULT_PRIME_BOUND)
    common.add_argument("--even-prime-bound", type=_number, default=DEFAULT_EVEN_PRIME_BOUND)
    common.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    common.add_argument("--method", choices=METHODS, default="direct")
    common.add_argument("--budget", type=_number, help="memory budget in bytes for census bit arrays")

    parser = argparse.ArgumentParser(prog="bernays", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constant", parents=[common], help="C(D) with its intermediate quantities")
    p.add_argument("-D", type=int, required=True)

    p = sub.add_parser("table", parents=[common], help="C(D) for a list of discriminants")
    p.add_argument("--discs", default="builtin60", help="file with one D per line, or builtin60")
    p.add_argument("--timing", action="store_true", help="fill the runtime_ms column")

    p = sub.add_parser("classgroup", parents=[common], help="reduced forms and genera")
    p.add_argument("-D", type=int, required=True)

    p = sub.add_parser("census", parents=[common], help="count integers represented by a form")
    p.add_argument("-D", type=int, required=True)
    p.add_argument("--form", type=_form)
    p.add_argument("-x", type=_number, required=True)
    p.add_argument("--coprime", action="store_true")
    p.add_argument("--per-genus", action="store_true")
    p.add_argument("--plot-data", type=Path, help="write (x, B sqrt(ln x)/x) pairs here")

    p = sub.add_parser("compare", parents=[common], help="Landau vs Ramanujan-integral approximations")
    p.add_argument("-D", type=int, required=True)
    p.add_argument("-x", type=_int_list, required=True)

    p = sub.add_parser("search", parents=[common], help="scan primes for large C(-q) or C(-4q)")
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--res", type=int, required=True)
    p.add_argument("--limit", type=_number, required=True)
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--family", choices=("-q", "-4q"), default="-q")
    p.add_argument("--fast-bound", type=_number, default=10**5)
    p.add_argument("--resume", type=Path, help="checkpoint file; resumed if present")

    p = sub.add_parser("gsum", parents=[common], help="Bernays genus sum against |D|/phi(|D|)")
    p.add_argument("-D", type=int, required=True)
    p.add_argument("-M", type=_number, default=10**6)
    return parser


def _fmt(value: float, err: float | None = None) -> str:
    return f"{value:.9f}" if err is None else f"{value:.9f} ± {err:.1e}"


def _emit(out, args, payload: dict, human: list[str], csv_text: str | None = None) -> None:
    if args.output == "json":
        out.write(json.dumps(payload) + "\n")
    elif args.output == "csv" and csv_text is not None:
        out.write(csv_text)
    else:
        out.write("\n".join(human) + "\n")


def _constant_kwargs(args) -> dict:
    return dict(
        method=args.method,
        prime_bound=args.prime_bound,
        depth=args.depth,
        even_prime_bound=args.even_prime_bound,
    )


def _table_row(job):
    D, kwargs = job
    return bernays_constant(D, **kwargs)


def cmd_constant(args, out) -> None:
    r = bernays_constant(args.D, **_constant_kwargs(args))
    human = [
        f"D       = {r.D.value}",
        f"h       = {r.h}",
        f"omega   = {r.omega}",
        f"phi     = {r.phi}",
        f"L(1)    = {_fmt(r.l_one.value, r.l_one.abs_error_bound)}",
        f"E       = {_fmt(r.e_d, r.e_err)}",
        f"J       = {_fmt(r.j_d)}",
        f"C       = {_fmt(r.c_d, r.c_err)}",
        f"method  = {r.method} (P = {r.prime_bound}, K = {r.depth})",
    ]
    _emit(out, args, r.to_dict(), human, reports_to_csv([r]))


def _read_discs(source: str) -> list[int]:
    if source == "builtin60":
        return list(TABLE)
    discs = []
    for line in Path(source).read_text().splitlines():
        line = line.split("#")[0].strip()
        if line:
            discs.append(int(line))
    return discs


def cmd_table(args, out) -> None:
    try:
        discs = _read_discs(args.discs)
    except (OSError, ValueError) as exc:
        raise InvalidDiscriminantError(f"cannot read discriminant list: {exc}")
    jobs = [(D, _constant_kwargs(args)) for D in discs]
    if _threads() > 1:
        with ProcessPoolExecutor(_threads()) as pool:
            reports = list(pool.map(_table_row, jobs))
    else:
        reports = [_table_row(j) for j in jobs]
    if args.output == "human":
        lines = [f"{'D':>7}  {'C(D)':>11}  {'err':>8}  {'published':>11}  {'diff':>9}"]
        for r in reports:
            ref = TABLE.get(r.D.value)
            tail = f"  {ref:.9f}  {r.c_d - ref:+.1e}" if ref is not None else ""
            lines.append(f"{r.D.value:>7}  {r.c_d:.9f}  {r.c_err:.1e}{tail}")
        out.write("\n".join(lines) + "\n")
    elif args.output == "json":
        out.write(json.dumps([r.to_dict() for r in reports]) + "\n")
    else:
        out.write(reports_to_csv(reports, timing=args.timing))


def cmd_classgroup(args, out) -> None:
    part = genus_partition(args.D)
    human = [f"D = {args.D}, h = {len(part.classes)}, genera = {len(part.genera)}"]
    human.append("characters: " + ", ".join(part.character_labels))
    for i in range(len(part.genera)):
        human.append(f"genus {i + 1}: " + " ".join(str(f) for f in part.genus_forms(i)))
    payload = {
        "D": args.D,
        "h": len(part.classes),
        "characters": list(part.character_labels),
        "genera": [[list(f) for f in part.genus_forms(i)] for i in range(len(part.genera))],
    }
    csv_text = "genus,a,b,c\n" + "".join(
        f"{i + 1},{f.a},{f.b},{f.c}\n" for i in range(len(part.genera)) for f in part.genus_forms(i)
    )
    _emit(out, args, payload, human, csv_text)


def cmd_census(args, out) -> None:
    f = args.form or principal_form(args.D)
    if f.discriminant != args.D:
        raise InvalidDiscriminantError(f"form {f} has discriminant {f.discriminant}, not {args.D}")
    C = bernays_constant(args.D, **_constant_kwargs(args)).c_d
    rec = census_mod.census(f, args.x, C)
    payload = {
        "D": args.D, "form": list(f), "x": rec.x, "count": rec.count,
        "count_coprime": rec.count_coprime, "landau_pred": rec.landau_pred,
        "integral_pred": rec.integral_pred, "c_used": rec.c_used,
    }
    human = [
        f"form {f}, x = {rec.x}",
        f"B(x)          = {rec.count}",
        f"C x/sqrt(ln x) = {_fmt(rec.landau_pred)}",
        f"C int dt/sqrt(ln t) = {_fmt(rec.integral_pred)}",
    ]
    if args.coprime:
        human.insert(2, f"B'(x)         = {rec.count_coprime}")
    if args.per_genus:
        g = census_mod.census_by_genus(args.D, args.x)
        payload["per_genus"] = {"counts": list(g.counts), "total": g.total, "overlap": g.overlap}
        for i, (cnt, share) in enumerate(zip(g.counts, g.shares), 1):
            human.append(f"genus {i}: {cnt} coprime values, share {share:.9f}")
    if args.plot_data:
        xs = sorted({max(3, args.x // 10**k) for k in range(6)})
        pairs = census_mod.plot_data(f, xs)
        args.plot_data.write_text("".join(f"{x} {r:.9f}\n" for x, r in pairs))
    _emit(out, args, payload, human, census_mod.records_to_csv([rec]))


def cmd_compare(args, out) -> None:
    C = bernays_constant(args.D, **_constant_kwargs(args)).c_d
    rows = census_mod.compare_approximations(args.D, args.x, C)
    human = [f"{'x':>12}  {'B(x)':>10}  {'|B-landau|':>18}  {'|B-integral|':>18}"]
    human += [f"{r.x:>12}  {r.count:>10}  {r.landau_err:>18.9f}  {r.integral_err:>18.9f}" for r in rows]
    payload = {"D": args.D, "C": C, "rows": [r.__dict__ for r in rows]}
    csv_text = "x,B,landau_err,integral_err\n" + "".join(
        f"{r.x},{r.count},{r.landau_err:.9f},{r.integral_err:.9f}\n" for r in rows
    )
    _emit(out, args, payload, human, csv_text)


def cmd_search(args, out) -> None:
    res = scan(
        args.mod, args.res, args.limit, args.top,
        family=args.family, fast_bound=args.fast_bound, full_bound=args.prime_bound,
        checkpoint=args.resume, resume=args.resume is not None,
    )
    human = [f"primes q = {res.residue} mod {res.modulus}, q <= {res.limit}, D = {res.family}"]
    human.append(f"scanned {res.scanned}, with C(D) > C(-8): {res.exceed_count}")
    for i, c in enumerate(res.top, 1):
        human.append(f"{i:>3}. q = {c.q:<11} h = {c.h:<7} L(1) = {c.l_one:.9f}  C = {_fmt(c.c_d, c.c_err)}")
    _emit(out, args, res.to_dict(), human, "\n".join(res.csv_lines()) + "\n")


def cmd_gsum(args, out) -> None:
    g = genus_sum_check(args.D, args.M)
    payload = {
        "D": g.D, "M": g.M, "terms": g.terms,
        "partial": str(g.partial), "upper": str(g.upper), "closed_form": str(g.closed_form),
        "contains": g.contains_closed_form,
    }
    human = [
        f"D = {g.D}, m | D^inf, m <= {g.M}: {g.terms} terms",
        f"partial sum   = {_fmt(float(g.partial))}",
        f"upper bracket = {_fmt(float(g.upper))}",
        f"|D|/phi(|D|)  = {g.closed_form} = {_fmt(float(g.closed_form))}",
        f"bracketed: {'yes' if g.contains_closed_form else 'NO'}",
    ]
    _emit(out, args, payload, human)


COMMANDS = {
    "constant": cmd_constant,
    "table": cmd_table,
    "classgroup": cmd_classgroup,
    "census": cmd_census,
    "compare": cmd_compare,
    "search": cmd_search,
    "gsum": cmd_gsum,
}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    saved_budget = os.environ.get("BERNAYS_MEMORY_BUDGET")
    if args.budget is not None:
        os.environ["BERNAYS_MEMORY_BUDGET"] = str(args.budget)
    try:
        COMMANDS[args.command](args, out)
    except BernaysError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        # --budget applies to this run only
        if saved_budget is None:
            os.environ.pop("BERNAYS_MEMORY_BUDGET", None)
        else:
            os.environ["BERNAYS_MEMORY_BUDGET"] = saved_budget
    return EXIT_OK


def main() -> None:
    sys.exit(run())
