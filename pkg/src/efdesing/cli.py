"""Command-line front end: ``efdesing FILE [COMMAND] [flags]``.

Reports are JSON on stdout (or ``--out``), with exact rationals as "p/q"
strings and keys in a fixed order.  A short human-readable summary goes to
stderr.  Exit codes: 0 success, 2 precondition rejection, 1 internal error.
"""

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor

from .core_exact import RatFun, format_rat, invariant_factors
from .desing import desingularize
from .diffop import (
    ScalarOperator, construct_witness_coefficients, frobenius_analyze, is_apparent,
    minimal_combination_operator,
)
from .diffsys import (
    DiffSystem, fundamental_series, singular_locus, solution_residual, sym_power,
    wronskian_order,
)
from .efunc import growth_report
from .errors import AlgebraError
from .parser import COMMANDS, parse_problem, parse_rational
from .relations import find_polynomial_relations, normalize_basis, specialization_rank
from .series import DEFAULT_ORDER

DEFAULT_DEGREE = 8


def _matrix(rows):
    return [[str(e) for e in r] for r in rows]


def _float(x):
    return format(x, ".6g")


def _vector_flag(text, n, name):
    if text is None:
        return None
    values = [parse_rational(v) for v in text.split(";")]
    if len(values) != n:
        raise AlgebraError(f"--{name} needs {n} entries, got {len(values)}")
    return values


def _need_functions(problem, command):
    if not problem.functions:
        raise AlgebraError(f"{command} needs a [functions] section")


def _relations(problem, system, flags):
    series = [f.series(flags.order) for f in problem.functions]
    degree = min(flags.degree, (flags.order - 10) // system.n - 1)
    if degree < 0:
        raise AlgebraError("order too small for degree bound")
    raw = find_polynomial_relations(series, degree)
    return raw, normalize_basis(raw), degree


def cmd_check(problem, system, flags):
    locus = singular_locus(system)
    report = {
        "n": system.n,
        "T": str(system.T),
        "singular_points": [{"point": format_rat(p), "multiplicity": m}
                            for p, m in locus.rational_points],
        "residual_factors": [str(f) for f in locus.residual_factors],
    }
    if problem.functions:
        ys = [f.series(flags.order) for f in problem.functions]
        ok = all(r.is_zero() for r in solution_residual(system, ys))
        report["functions_solve_system"] = ok
        report["verified_order"] = flags.order - 1
    orders = {}
    for p, _ in locus.rational_points:
        if p:
            try:
                orders[format_rat(p)] = wronskian_order(system, p)
            except AlgebraError as exc:
                orders[format_rat(p)] = str(exc)
    report["wronskian_orders"] = orders
    return report


def cmd_desing(problem, system, flags):
    _need_functions(problem, "desing")
    res = desingularize(system, problem.functions, flags.order, flags.degree)
    return {
        "step_count": len(res.steps),
        "steps": [{
            "alpha": format_rat(s.alpha),
            "pole_order": s.k,
            "M": _matrix(s.M),
            "D_index": s.D_index,
            "wronskian_before": s.wronskian_before,
            "wronskian_after": s.wronskian_after,
            "after": _matrix(s.after.A),
        } for s in res.steps],
        "B": _matrix(res.B.to_rows()),
        "final_system": _matrix(res.final_system.A),
        "final_denominator": f"z^{res.final_z_power()}",
        "e_functions": [{"name": e.name,
                         "coefficients": [format_rat(a) for a in e.coefficients(7)]}
                        for e in res.e_functions],
        "verified_order": res.order,
        "independence_degree": res.degree,
    }


def cmd_relations(problem, system, flags):
    _need_functions(problem, "relations")
    raw, norm, degree = _relations(problem, system, flags)
    report = {
        "degree": degree,
        "order": flags.order,
        "status": f"verified to order {flags.order}",
        "rank_deficit": raw.rank_deficit,
        "rank": system.n - raw.rank_deficit,
        "raw_basis": _matrix(raw.rows()),
        "raw_invariant_factors": [str(d) for d in invariant_factors(raw.C)] if raw.C.rows else [],
        "normalized_basis": _matrix(norm.rows()),
    }
    if flags.point is not None:
        report["specialization_rank"] = specialization_rank(norm, parse_rational(flags.point))
    return report


def _operator_for(problem, system, flags):
    if problem.operator is not None:
        return ScalarOperator(problem.operator), "file"
    combo = _vector_flag(flags.combo, system.n, "combo") or [1] + [0] * (system.n - 1)
    C = None
    if problem.functions:
        _, C, _ = _relations(problem, system, flags)
    op, _ = minimal_combination_operator(system, C, combo)
    return op, "minimal operator of " + ";".join(format_rat(c) for c in combo)


def cmd_apparent(problem, system, flags):
    if flags.point is None:
        raise AlgebraError("apparent needs --point")
    xi = parse_rational(flags.point)
    op, source = _operator_for(problem, system, flags)
    data = frobenius_analyze(op, xi, flags.order)
    apparent, vanish = is_apparent(op, xi, flags.order)
    return {
        "operator_source": source,
        "operator": [str(p) for p in op.coeffs],
        "point": format_rat(xi),
        "indicial": str(data.indicial),
        "exponents": [format_rat(e) for e in data.exponents],
        "log_involved": data.log_involved,
        "holomorphic_basis_count": data.holomorphic_basis_count,
        "min_valuation": data.min_valuation,
        "apparent": apparent,
        "all_vanish": vanish,
    }


def cmd_sympow(problem, system, flags):
    result, mons = sym_power(system, flags.N)
    return {"N": flags.N, "monomials": [list(m) for m in mons], "system": _matrix(result.A)}


def cmd_minop(problem, system, flags):
    C = None
    if problem.functions:
        _, C, _ = _relations(problem, system, flags)
    report = {"relations": _matrix(C.rows()) if C is not None else []}
    alpha = _vector_flag(flags.alpha, system.n, "alpha")
    if alpha is not None:
        if flags.point is None:
            raise AlgebraError("--alpha needs --point")
        xi = parse_rational(flags.point)
        combo = construct_witness_coefficients(system, C, xi, alpha)
        report["witness_point"] = format_rat(xi)
        report["witness_coefficients"] = [str(p) for p in combo]
    else:
        combo = _vector_flag(flags.combo, system.n, "combo") or [1] + [0] * (system.n - 1)
    op, deltas = minimal_combination_operator(system, C, combo)
    report["combination"] = [str(RatFun.coerce(c)) for c in combo]
    report["order"] = op.order
    report["deltas"] = [str(d) for d in deltas]
    if alpha is not None:
        report["delta_top_at_point"] = format_rat(deltas[-1](xi))
    return report


def cmd_growth(problem, system, flags):
    _need_functions(problem, "growth")
    out = []
    for f in problem.functions:
        g = growth_report(f, max(flags.order, 10))
        out.append({"name": f.name, "K": g.K, "B": _float(g.B), "C": _float(g.C),
                    "B1": _float(g.B1), "C1": _float(g.C1), "hmax": _float(g.hmax),
                    "superexponential": g.superexponential})
    return {"functions": out}


def cmd_series(problem, system, flags):
    xi = parse_rational(flags.point) if flags.point is not None else 0
    Y = fundamental_series(system, xi, flags.order)
    return {"point": format_rat(xi), "order": flags.order,
            "fundamental": [[[format_rat(c) for c in s.coeffs] for s in row] for row in Y]}


HANDLERS = {
    "check": cmd_check, "desing": cmd_desing, "relations": cmd_relations,
    "apparent": cmd_apparent, "sympow": cmd_sympow, "minop": cmd_minop,
    "growth": cmd_growth, "series": cmd_series,
}


def _flag_parser():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--degree", type=int, default=DEFAULT_DEGREE)
    p.add_argument("--point", "--xi", dest="point", default=None)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--combo", default=None, help="semicolon-separated rational coefficients")
    p.add_argument("--alpha", default=None, help="value relation for witness construction")
    return p


def run(problem, command, flags):
    """Run one subcommand on a parsed problem and return its report."""
    if command not in HANDLERS:
        raise AlgebraError(f"unknown command {command!r}")
    system = DiffSystem(problem.system)
    report = {"command": command}
    report.update(HANDLERS[command](problem, system, flags))
    return report


def render(report):
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _summary(report):
    cmd = report["command"]
    if cmd == "desing":
        return f"desing: {report['step_count']} step(s), final denominator {report['final_denominator']}"
    if cmd == "apparent":
        return f"apparent at {report['point']}: apparent={report['apparent']} all_vanish={report['all_vanish']}"
    if cmd == "relations":
        return f"relations: rank deficit {report['rank_deficit']}"
    if cmd == "minop":
        return f"minop: order {report['order']}"
    return f"{cmd}: done"


def main(argv=None):
    parser = argparse.ArgumentParser(prog="efdesing", parents=[_flag_parser()],
                                     description=__doc__.splitlines()[0])
    parser.add_argument("file")
    parser.add_argument("command", nargs="?", choices=COMMANDS)
    parser.add_argument("--out", default=None)
    parser.add_argument("--quiet", action="store_true")
    parser.add_argument("--verbose", action="store_true")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with open(args.file, encoding="utf-8") as fh:
            problem = parse_problem(fh.read())
        if args.command:
            report = run(problem, args.command, args)
            summaries = [_summary(report)]
        else:
            if not problem.tasks:
                raise AlgebraError("no command given and the file has no [tasks]")
            jobs = [(name, _flag_parser().parse_args(words)) for name, words in problem.tasks]
            # tasks are independent; reports are merged back in file order
            with ThreadPoolExecutor() as pool:
                reports = list(pool.map(lambda job: run(problem, *job), jobs))
            report = {"tasks": reports}
            summaries = [_summary(r) for r in reports]
    except (AlgebraError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = render(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not args.quiet:
        for line in summaries:
            print(line, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
