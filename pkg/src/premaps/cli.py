"""Command-line surface: counting, statistics, asymptotics, figures, verification.

Subcommands
-----------
count    exact count of one family at one size, as JSON
series   a family's truncated series, exact or float backend, as JSON
stat     exact average of a statistic over constrained functions
asym     singularity constants and the tau_k sequence
figures  CSV datasets behind the figures (counts, overlays, tau-k,
         coalescence, cyclic-vs-coalescence)
verify   brute-force oracle vs. series equivalence sweep

Figure CSVs are byte-deterministic: fixed column order (constraints
sorted lexicographically by element list, the unconstrained column
last), 12 significant digits, LF line endings, and the literal cell
`-inf` where a count is zero.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import sys
from fractions import Fraction

from . import asymptotics, enumeration, families, oracle
from .constraint import ALL_NONNEGATIVE, PreimageConstraint

LOG2 = math.log(2.0)
NEG_INF = float("-inf")


def _finite_admissible() -> list[PreimageConstraint]:
    """Every P inside {0..4} with 0 in P and an element above 1, sorted."""
    found = []
    for r in range(5):
        for extra in itertools.combinations((1, 2, 3, 4), r):
            p = PreimageConstraint.finite((0,) + extra)
            if p.smallest_above_one() is not None:
                found.append(p)
    return sorted(found, key=PreimageConstraint.sort_key)


def _aperiodic_curves() -> list[PreimageConstraint]:
    return [p for p in _finite_admissible() if p.classify().period == 1]


def _periodic_scatter() -> list[PreimageConstraint]:
    return [p for p in _finite_admissible() if p.classify().period > 1]


def _curve_set() -> list[PreimageConstraint]:
    return _aperiodic_curves() + [ALL_NONNEGATIVE]


def _fmt(value: float) -> str:
    if value == NEG_INF:
        return "-inf"
    return format(value, ".12g")


def _log2_count(value: int) -> float:
    if value == 0:
        return NEG_INF
    return math.log2(value)


def _log2_estimated_count(constraint, family, n) -> float:
    est = asymptotics.coefficient_asymptote(constraint, family, n)
    return (est.log + math.lgamma(n + 1)) / LOG2


# -- figure emission -------------------------------------------------------


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _count_figure(constraints, family, n_max):
    header = ["n"] + [str(p) for p in constraints]
    rows = []
    for n in range(1, n_max + 1):
        cells = [str(n)]
        for p in constraints:
            report = enumeration.count(p, family, n)
            cells.append(_fmt(_log2_count(report.count)))
        rows.append(cells)
    return header, rows


def _overlay_figure(constraint, n_max):
    header = ["n", "tree-exact", "tree-estimate", "function-exact", "function-estimate"]
    rows = []
    for n in range(1, n_max + 1):
        tree = enumeration.count(constraint, families.TREE, n).count
        func = enumeration.count(constraint, families.FUNCTION, n).count
        rows.append(
            [
                str(n),
                _fmt(_log2_count(tree)),
                _fmt(_log2_estimated_count(constraint, families.TREE, n)),
                _fmt(_log2_count(func)),
                _fmt(_log2_estimated_count(constraint, families.FUNCTION, n)),
            ]
        )
    return header, rows


def _tau_k_figure(k_max):
    curves = _curve_set()
    header = ["k"] + [str(p) for p in curves]
    columns = []
    for p in curves:
        data = asymptotics.solve_singular(p)
        taus = asymptotics.tau_sequence(p, k_max).values
        columns.append([math.log2(1.0 - taus[k] / data.tau) for k in range(1, k_max + 1)])
    rows = []
    for i, k in enumerate(range(1, k_max + 1)):
        rows.append([str(k)] + [_fmt(col[i]) for col in columns])
    return header, rows


def _coalescence_figure(k_max):
    curves = _curve_set()
    header = ["k"] + [str(p) for p in curves]
    base = asymptotics.solve_singular(ALL_NONNEGATIVE)
    base_taus = asymptotics.tau_sequence(ALL_NONNEGATIVE, k_max).values
    columns = []
    for p in curves:
        data = asymptotics.solve_singular(p)
        taus = asymptotics.tau_sequence(p, k_max).values
        columns.append(
            [
                math.log2(1.0 - taus[k] / data.tau)
                - math.log2(1.0 - base_taus[k] / base.tau)
                for k in range(1, k_max + 1)
            ]
        )
    rows = []
    for i, k in enumerate(range(1, k_max + 1)):
        rows.append([str(k)] + [_fmt(col[i]) for col in columns])
    return header, rows


def _cyclic_scatter_figure(k_max):
    header = ["constraint", "coalescence", "cyclic-constant"]
    rows = []
    for p in _curve_set():
        metric = asymptotics.coalescence_metric(p, k_max)
        constant = asymptotics.average_cyclic_asymptote(p, 1)
        rows.append([str(p), _fmt(metric), _fmt(constant)])
    return header, rows


FIGURE_IDS = (
    "tree-counts",
    "tree-counts-periodic",
    "function-counts",
    "function-counts-periodic",
    "partial-function-counts",
    "overlay-034",
    "overlay-04",
    "tau-k",
    "coalescence",
    "cyclic-vs-coalescence",
)


def _figure_table(figure_id: str, n_max: int, k_max: int):
    if figure_id == "tree-counts":
        return _count_figure(_aperiodic_curves(), families.TREE, n_max)
    if figure_id == "tree-counts-periodic":
        return _count_figure(_periodic_scatter(), families.TREE, n_max)
    if figure_id == "function-counts":
        return _count_figure(_aperiodic_curves(), families.FUNCTION, n_max)
    if figure_id == "function-counts-periodic":
        return _count_figure(_periodic_scatter(), families.FUNCTION, n_max)
    if figure_id == "partial-function-counts":
        return _count_figure(_finite_admissible(), families.PARTIAL_FUNCTION, n_max)
    if figure_id == "overlay-034":
        return _overlay_figure(PreimageConstraint.finite((0, 3, 4)), n_max)
    if figure_id == "overlay-04":
        return _overlay_figure(PreimageConstraint.finite((0, 4)), n_max)
    if figure_id == "tau-k":
        return _tau_k_figure(k_max)
    if figure_id == "coalescence":
        return _coalescence_figure(k_max)
    if figure_id == "cyclic-vs-coalescence":
        return _cyclic_scatter_figure(k_max)
    raise ValueError(f"unknown figure id {figure_id!r}")


# -- verify ----------------------------------------------------------------


def _verify(n_max: int, k_max: int, out=sys.stdout) -> int:
    constraints = []
    for r in range(5):
        for extra in itertools.combinations((1, 2, 3, 4), r):
            constraints.append(PreimageConstraint.finite((0,) + extra))
    constraints.sort(key=PreimageConstraint.sort_key)

    failures = 0
    checks = 0
    print(f"{'constraint':<12} {'checks':>7} {'status':>8}", file=out)
    for p in constraints:
        local_failures = []
        local_checks = 0
        for n in range(n_max + 1):
            summary = oracle.enumerate_mappings(p, n, k_max)
            fact = math.factorial(n)

            def series_total(family) -> int:
                coeff = enumeration.family_series(p, family, n).coefficient(n)
                value = Fraction(fact) * coeff
                assert value.denominator == 1
                return int(value)

            expected = {
                "functions": int(fact * enumeration.function_coefficient(p, n)),
                "partial-functions": int(
                    fact * enumeration.partial_function_coefficient(p, n)
                ),
                "trees": int(fact * enumeration.tree_coefficient(p, n)),
                "connected": series_total(families.CONNECTED),
                "cyclic-points": series_total(families.XI_CYCLIC),
                "components": series_total(families.XI_COMPONENT),
            }
            observed = {
                "functions": summary.function_count,
                "partial-functions": summary.partial_function_count,
                "trees": summary.tree_count,
                "connected": summary.connected_count,
                "cyclic-points": summary.total_cyclic_points,
                "components": summary.total_components,
            }
            for k in range(k_max + 1):
                expected[f"deficiency[{k}]"] = series_total(families.xi_image(k))
                observed[f"deficiency[{k}]"] = summary.total_image_deficiency[k]

            for name, want in expected.items():
                local_checks += 1
                if observed[name] != want:
                    local_failures.append(
                        f"  n={n} {name}: series={want} oracle={observed[name]}"
                    )
        status = "ok" if not local_failures else "FAIL"
        print(f"{str(p):<12} {local_checks:>7} {status:>8}", file=out)
        for line in local_failures:
            print(line, file=out)
        failures += len(local_failures)
        checks += local_checks
    verdict = "all checks passed" if failures == 0 else f"{failures} checks FAILED"
    print(f"total: {checks} comparisons; {verdict}", file=out)
    return 0 if failures == 0 else 1


# -- argument plumbing -------------------------------------------------------


def _add_constraint_arg(parser) -> None:
    parser.add_argument(
        "--constraint",
        required=True,
        type=PreimageConstraint.parse,
        help="comma-separated preimage sizes, e.g. 0,3,4, or the token 'all'",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="premaps",
        description="Exact and asymptotic enumeration of preimage-constrained mappings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_count = sub.add_parser("count", help="exact count of one family at one size")
    _add_constraint_arg(p_count)
    p_count.add_argument("--family", required=True, choices=sorted(
        ("tree", "bounded-tree", "function", "partial-function", "connected",
         "xi-image", "xi-partial-image", "xi-cyclic", "xi-component")))
    p_count.add_argument("--n", required=True, type=int)
    p_count.add_argument("--k", type=int, help="iteration count for xi-image families")
    p_count.add_argument("--height", type=int, help="height bound for bounded-tree")

    p_series = sub.add_parser("series", help="truncated series of one family")
    _add_constraint_arg(p_series)
    p_series.add_argument("--family", required=True, choices=sorted(
        ("tree", "bounded-tree", "function", "partial-function", "connected",
         "xi-image", "xi-partial-image", "xi-cyclic", "xi-component")))
    p_series.add_argument("--order", required=True, type=int)
    p_series.add_argument("--backend", choices=("exact", "float"), default="exact")
    p_series.add_argument("--k", type=int)
    p_series.add_argument("--height", type=int)

    p_stat = sub.add_parser("stat", help="exact average of a statistic")
    _add_constraint_arg(p_stat)
    p_stat.add_argument("--stat", required=True, choices=(
        "image-deficiency", "image-size", "cyclic-points", "components"))
    p_stat.add_argument("--n", required=True, type=int)
    p_stat.add_argument("--k", type=int)

    p_asym = sub.add_parser("asym", help="singularity constants and tau_k sequence")
    _add_constraint_arg(p_asym)
    p_asym.add_argument("--k-max", type=int, default=50)
    p_asym.add_argument("--tol", type=float, default=1e-13)

    p_fig = sub.add_parser("figures", help="emit figure datasets as CSV")
    p_fig.add_argument("--id", required=True, choices=FIGURE_IDS + ("all",))
    p_fig.add_argument("--out", default=".", help="output directory")
    p_fig.add_argument("--n-max", type=int, default=30)
    p_fig.add_argument("--k-max", type=int, default=None,
                       help="default: 64 for tau-k/coalescence, 40 for the scatter")

    p_verify = sub.add_parser("verify", help="oracle vs. series equivalence sweep")
    p_verify.add_argument("--n-max", type=int, default=6)
    p_verify.add_argument("--k-max", type=int, default=6)

    return parser


def _family_from_args(args) -> families.FamilyKind:
    if args.family == "bounded-tree":
        if args.height is None:
            raise ValueError("bounded-tree needs --height")
        return families.bounded_tree(args.height)
    if args.family in ("xi-image", "xi-partial-image"):
        if args.k is None:
            raise ValueError(f"{args.family} needs --k")
        return families.parse_family(args.family, args.k)
    if args.k is not None or args.height is not None:
        raise ValueError(f"family {args.family!r} takes neither --k nor --height")
    return families.parse_family(args.family)


def _run_count(args) -> int:
    report = enumeration.count(args.constraint, _family_from_args(args), args.n)
    print(json.dumps(report.to_json(), indent=2))
    return 0


def _run_series(args) -> int:
    family = _family_from_args(args)
    result = enumeration.family_series(
        args.constraint, family, args.order, backend=args.backend
    )
    doc: dict = {
        "constraint": str(args.constraint),
        "family": family.tag,
    }
    if family.param is not None:
        doc["height" if family.tag == "bounded-tree" else "k"] = family.param
    doc["order"] = args.order
    doc["backend"] = args.backend
    if args.backend == "exact":
        doc["coefficients"] = result.to_json()
    else:
        doc["coefficients"] = list(result.coefficients)
        doc["rate"] = result.rate
    print(json.dumps(doc, indent=2))
    return 0


def _run_stat(args) -> int:
    value = enumeration.expected_statistic(args.constraint, args.stat, args.n, args.k)
    doc = {
        "constraint": str(args.constraint),
        "stat": args.stat,
        "n": args.n,
        "value": f"{value.numerator}/{value.denominator}",
        "decimal": float(value),
    }
    if args.k is not None:
        doc["k"] = args.k
    print(json.dumps(doc, indent=2))
    return 0


def _run_asym(args) -> int:
    data = asymptotics.solve_singular(args.constraint, args.tol)
    taus = asymptotics.tau_sequence(args.constraint, args.k_max, args.tol)
    doc = data.to_json()
    doc["tau_k"] = list(taus.values)
    print(json.dumps(doc, indent=2))
    return 0


def _run_figures(args) -> int:
    import os

    os.makedirs(args.out, exist_ok=True)
    ids = FIGURE_IDS if args.id == "all" else (args.id,)
    for figure_id in ids:
        if args.k_max is not None:
            k_max = args.k_max
        else:
            k_max = 40 if figure_id == "cyclic-vs-coalescence" else 64
        header, rows = _figure_table(figure_id, args.n_max, k_max)
        path = os.path.join(args.out, f"{figure_id}.csv")
        _write_csv(path, header, rows)
        print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "count": _run_count,
        "series": _run_series,
        "stat": _run_stat,
        "asym": _run_asym,
        "figures": _run_figures,
        "verify": lambda a: _verify(a.n_max, a.k_max),
    }
    try:
        return handlers[args.command](args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
