"""Command-line front end.

Subcommands:
  constants  print kernel and bound constants for (p, alpha) at a sigma
             or across the gamma-indexed family
  apply      evaluate D^alpha or I^alpha on a radial function file
  solve      run the full Cauchy pipeline, write a solution CSV and a
             JSON report
  verify     run the oracle-equivalence and identity suites
  sweep      solve a (p, alpha, gamma) grid, one CSV row per cell

Numbers are printed with 12 significant digits; summation orders are
fixed, so repeated runs with the same configuration are bit-identical.
Exit codes: 0 success, 2 precondition violation, 3 convergence or
verification failure.

The environment variable PADIC_RADIAL_MAX_THREADS caps the number of
worker threads `verify` may use (default 1, i.e. serial); results are
canonically ordered before printing either way.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys

from .errors import (
    BudgetError,
    DomainError,
    IndeterminateResidualError,
    MagnitudeError,
    MetadataError,
    NonConvergenceError,
)
from .haar import (
    ball_log_integral,
    ball_log_integral_oracle,
    ball_power_integral,
    ball_power_integral_oracle,
    p_pow,
    sphere_shifted_log_integral,
    sphere_shifted_log_integral_oracle,
    sphere_shifted_power_integral,
    sphere_shifted_power_integral_oracle,
)
from .radial import RadialFunction, TailModel, dump_radial, load_radial
from .vladimirov import apply_dalpha, apply_dalpha_oracle
from .fracint import (
    apply_ialpha,
    assemble_fractional_integral,
    bound_constants,
    kernel_constant,
    kernel_constant_oracle,
)
from .cauchy import (
    ProblemSpec,
    catalog_nonlinearity,
    check_global_hypotheses,
    residual,
    solve_problem,
)

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_FAILURE = 3


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _max_threads() -> int:
    raw = os.environ.get("PADIC_RADIAL_MAX_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# -- run configuration ---------------------------------------------------------

_CONFIG_KEYS = {
    "p": int, "alpha": float, "gamma": float, "u0": float,
    "rhs": str, "rhs_amplitude": float, "rhs_beta": float,
    "tol": float, "max_iter": int, "n_override": int, "extend_to": int,
    "buffer": int, "csv_out": str, "report_out": str, "solution_out": str,
}


class RunConfig(dict):
    """Solver run parameters from a key = value file plus flag overrides.

    Flags win over file entries.  ``problem()`` validates the combination
    into a ProblemSpec; a malformed file fails with the line and field
    named.
    """

    @staticmethod
    def from_sources(config_path, args) -> "RunConfig":
        cfg = RunConfig()
        if config_path:
            cfg.update(_parse_config(config_path))
        for key in _CONFIG_KEYS:
            flag = getattr(args, key, None)
            if flag is not None:
                cfg[key] = flag
        return cfg

    def problem(self) -> ProblemSpec:
        for field in ("p", "alpha", "gamma", "u0"):
            if field not in self:
                raise DomainError(f"missing required field {field!r}")
        rhs = catalog_nonlinearity(
            self.get("rhs", "zero"), self["p"],
            amplitude=self.get("rhs_amplitude", 0.1), beta=self.get("rhs_beta", 2.0),
        )
        return ProblemSpec(p=self["p"], alpha=self["alpha"], gamma=self["gamma"],
                           u0=self["u0"], rhs=rhs)


def _parse_config(path: str) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path} line {lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in _CONFIG_KEYS:
                raise DomainError(f"{path} line {lineno}: unknown key {key!r}")
            if val == "":
                continue
            try:
                out[key] = _CONFIG_KEYS[key](val)
            except ValueError as err:
                raise DomainError(f"{path} line {lineno}: field {key!r}: {err}") from err
    return out


# -- constants ----------------------------------------------------------------

def cmd_constants(args) -> int:
    if (args.sigma is None) == (args.gamma is None):
        raise DomainError("exactly one of --sigma or --gamma is required")
    if args.sigma is not None:
        kc = kernel_constant(args.p, args.alpha, args.sigma)
        print(f"d_abs {_fmt(kc.d_abs)}")
        print(f"s_signed {_fmt(kc.s_signed)}")
        print(f"a_bound {_fmt(kc.a_bound)}")
        return EXIT_OK
    bc = bound_constants(args.p, args.alpha, args.gamma)
    for n in range(args.nmax + 1):
        print(f"C_{n} {_fmt(bc.c_n(n))}")
    print(f"C {_fmt(bc.c_uniform)}")
    return EXIT_OK


# -- apply --------------------------------------------------------------------

def _parse_levels(text: str):
    if ":" in text:
        lo, _, hi = text.partition(":")
        return range(int(lo), int(hi) + 1)
    n = int(text)
    return range(n, n + 1)


def cmd_apply(args) -> int:
    with open(args.input, "r", encoding="utf-8") as fh:
        u = load_radial(fh.read())
    op = {"dalpha": apply_dalpha, "ialpha": apply_ialpha}.get(args.op)
    if op is None:
        raise DomainError(f"--op must be dalpha or ialpha, got {args.op!r}")
    for k in _parse_levels(args.levels):
        print(f"{k} {_fmt(op(u, args.alpha, k))}")
    return EXIT_OK


# -- solve --------------------------------------------------------------------

def cmd_solve(args) -> int:
    cfg = RunConfig.from_sources(args.config, args)
    problem = cfg.problem()
    tol = cfg.get("tol", 1e-10)
    buffer = cfg.get("buffer", 3)
    report = solve_problem(
        problem, tol=tol, max_iter=cfg.get("max_iter", 200),
        n_override=cfg.get("n_override"), extend_to=cfg.get("extend_to"),
    )
    hyp = check_global_hypotheses(problem)
    u = report.solution

    rows = []
    max_resid = None
    cont = report.c_uniform * problem.rhs.bound_M / (1.0 - report.q_contraction) \
        if report.q_contraction < 1.0 else None
    for k in range(u.k_min, u.k_max + 1):
        bound = ""
        if k <= report.local_radius_N and cont is not None:
            bound = _fmt(cont * p_pow(problem.p, k * (problem.alpha - problem.gamma)))
        res = unc = ""
        if hyp.residual_verifiable:
            try:
                est = residual(u, problem, k, tol=max(tol * 100.0, 1e-9), buffer=buffer)
                res, unc = _fmt(est.value), _fmt(est.uncertainty)
                if max_resid is None or abs(est.value) > max_resid:
                    max_resid = abs(est.value)
            except IndeterminateResidualError:
                pass
        rows.append(f"{k},{k},{_fmt(u.value_at(k))},{bound},{res},{unc}")

    csv_out = cfg.get("csv_out")
    lines = ["k,radius_exponent,u,apriori_bound,residual,residual_uncertainty"] + rows
    if csv_out:
        with open(csv_out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        for line in lines:
            print(line)

    report_out = cfg.get("report_out")
    if report_out:
        payload = report.to_dict()
        payload["hypotheses"] = {
            "per_level_ok": hyp.per_level_ok,
            "witness_level": hyp.witness_level,
            "decay_ok": hyp.decay_ok,
            "residual_verifiable": hyp.residual_verifiable,
            "detail": hyp.detail,
        }
        with open(report_out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")

    solution_out = cfg.get("solution_out")
    if solution_out:
        with open(solution_out, "w", encoding="utf-8") as fh:
            fh.write(dump_radial(u))

    print(f"N {report.local_radius_N}")
    print(f"k_min {report.k_min}")
    print(f"k_max {u.k_max}")
    print(f"picard_iterations {report.picard_iterations}")
    print(f"truncation_budget {_fmt(report.truncation_budget)}")
    if hyp.residual_verifiable:
        print(f"max_residual {_fmt(max_resid) if max_resid is not None else 'none'}")
    else:
        print(f"residuals unavailable: {hyp.detail}")
    return EXIT_OK


# -- verify -------------------------------------------------------------------

def _suite_haar(depth: int, family: str):
    cells = []
    for p in (2, 3, 5):
        for a in (0.5, 1.0, 1.5, 2.0, 3.0):
            worst = 0.0
            for n in range(-5, 6):
                c = ball_power_integral(p, a, n)
                worst = max(worst, abs(c - ball_power_integral_oracle(p, a, n, depth)) / abs(c))
                c = sphere_shifted_power_integral(p, a, n)
                worst = max(worst, abs(c - sphere_shifted_power_integral_oracle(p, a, n, depth)) / abs(c))
            cells.append((f"power-p{p}-a{a:g}", worst <= 1e-12, f"max_rel {worst:.2e}"))
        worst = 0.0
        for n in range(-5, 6):
            c = ball_log_integral(p, n)
            worst = max(worst, abs(c - ball_log_integral_oracle(p, n, depth)) / (1 + abs(c)))
            c = sphere_shifted_log_integral(p, n)
            worst = max(worst, abs(c - sphere_shifted_log_integral_oracle(p, n, depth)) / (1 + abs(c)))
        cells.append((f"log-p{p}", worst <= 1e-12, f"max_rel {worst:.2e}"))
    return cells


def _suite_kernel(depth: int, family: str):
    cells = []
    for p in (2, 3, 5):
        for alpha in (0.5, 1.0, 2.0):
            boundary = max(-1.0 / alpha, -1.0)
            worst = 0.0
            for i in range(20):
                sigma = boundary + (0.4 + 0.3 * i) / alpha
                d = kernel_constant(p, alpha, sigma).d_abs
                o = kernel_constant_oracle(p, alpha, sigma, depth)
                worst = max(worst, abs(d - o) / abs(d))
            cells.append((f"p{p}-alpha{alpha:g}", worst <= 1e-12, f"max_rel {worst:.2e}"))
    spot = abs(kernel_constant(2, 2.0, 0.0).d_abs - 1.0 / 3.0)
    cells.append(("spot-d(2,2,0)", spot <= 1e-13, f"abs {spot:.2e}"))
    spot = abs(kernel_constant(2, 1.0, 0.0).d_abs - math.log(2.0))
    cells.append(("spot-d(2,1,0)", spot <= 1e-13, f"abs {spot:.2e}"))
    return cells


def _suite_bounds(depth: int, family: str):
    cells = []
    for p in (2, 3, 5):
        for alpha in (0.5, 1.0, 2.0):
            boundary = max(-1.0 / alpha, -1.0)
            a_shared = kernel_constant(p, alpha, boundary + 0.05).a_bound
            ok = True
            for i in range(100):
                sigma = boundary + 0.05 + 0.07 * i
                d = kernel_constant(p, alpha, sigma).d_abs
                if d * p_pow(p, alpha * sigma) > a_shared * (1.0 + 1e-12):
                    ok = False
                    break
            cells.append((f"envelope-p{p}-alpha{alpha:g}", ok, ""))
            gamma = 0.4 * min(1.0, alpha)
            bc = bound_constants(p, alpha, gamma)
            ok = all(bc.c_n(n) <= bc.c_uniform * (1.0 + 1e-12) for n in range(51))
            cells.append((f"cn-p{p}-alpha{alpha:g}", ok, f"C {bc.c_uniform:.6g}"))
    return cells


def _test_family(p: int, family: str):
    members = {
        "indicator": [RadialFunction.indicator_unit_ball(p)],
        "const-minus-indicator": [RadialFunction(
            p, 0, 0, (1.5,), TailModel.constant(1.5), TailModel.constant(2.5), 1.5)],
        "power": [RadialFunction.split_power(p, 0.0, -0.5),
                  RadialFunction.split_power(p, 0.5, -1.0)],
    }
    if family == "all":
        return [u for fam in members.values() for u in fam]
    if family not in members:
        raise DomainError(f"unknown test family {family!r}; options: "
                          f"{sorted(members)} or all")
    return members[family]


def _suite_dalpha_oracle(depth: int, family: str):
    cells = []
    for p in (2, 3, 5):
        for alpha in (0.5, 1.0, 2.0):
            worst = 0.0
            for u in _test_family(p, family):
                for n in range(-8, 9):
                    a = apply_dalpha(u, alpha, n)
                    b = apply_dalpha_oracle(u, alpha, n, depth)
                    worst = max(worst, abs(a - b) / (1.0 + abs(a)))
            cells.append((f"p{p}-alpha{alpha:g}", worst <= 1e-10, f"max_rel {worst:.2e}"))
    return cells


def _inverse_family(p: int, family: str):
    # admissible for the inverse identity: sum_l |v(p^l)| must converge,
    # which rules the constant-right-tail member out
    if family in ("all", "const-minus-indicator"):
        return _test_family(p, "indicator") + _test_family(p, "power")
    return _test_family(p, family)


def _suite_right_inverse(depth: int, family: str):
    cells = []
    for p in (2, 3):
        for alpha in (0.5, 1.0, 2.0):
            worst = 0.0
            for v in _inverse_family(p, family):
                vmax = max(abs(v.value_at(k)) for k in range(-10, 11))
                iv = assemble_fractional_integral(v, alpha)
                for n in range(-8, 9):
                    err = abs(apply_dalpha(iv, alpha, n) - v.value_at(n))
                    worst = max(worst, err / (1.0 + vmax))
            cells.append((f"p{p}-alpha{alpha:g}", worst <= 1e-8, f"max_err {worst:.2e}"))
    return cells


_SUITES = {
    "haar": _suite_haar,
    "kernel": _suite_kernel,
    "bounds": _suite_bounds,
    "dalpha-oracle": _suite_dalpha_oracle,
    "right-inverse": _suite_right_inverse,
}


def cmd_verify(args) -> int:
    names = sorted(_SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        if name not in _SUITES:
            raise DomainError(f"unknown suite {name!r}; options: {sorted(_SUITES)} or all")
    workers = min(_max_threads(), len(names))
    results = []
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            futs = {pool.submit(_SUITES[nm], args.depth, args.family): nm for nm in names}
            for fut, nm in futs.items():
                results.extend((nm, cell, ok, detail) for cell, ok, detail in fut.result())
    else:
        for nm in names:
            results.extend((nm, cell, ok, detail) for cell, ok, detail in _SUITES[nm](args.depth, args.family))
    results.sort(key=lambda r: (r[0], r[1]))
    failures = 0
    for suite, cell, ok, detail in results:
        status = "pass" if ok else "FAIL"
        line = f"{suite} {cell} {status}"
        if detail:
            line += f" {detail}"
        print(line)
        failures += 0 if ok else 1
    print(f"{'ALL PASS' if failures == 0 else f'FAILURES {failures}'} ({len(results)} cells)")
    return EXIT_OK if failures == 0 else EXIT_FAILURE


# -- sweep --------------------------------------------------------------------

def cmd_sweep(args) -> int:
    ps = [int(x) for x in args.p_list.split(",")]
    alphas = [float(x) for x in args.alpha_list.split(",")]
    header = ("p,alpha,gamma,N,k_min,k_max,picard_iterations,"
              "max_abs_residual,residual_levels,truncation_budget,status")
    lines = [header]
    for p in ps:
        for alpha in alphas:
            gamma = args.gamma_frac * min(1.0, alpha)
            row = f"{p},{_fmt(alpha)},{_fmt(gamma)}"
            try:
                rhs = catalog_nonlinearity(args.rhs, p, amplitude=args.rhs_amplitude,
                                           beta=args.rhs_beta)
                problem = ProblemSpec(p=p, alpha=alpha, gamma=gamma, u0=args.u0, rhs=rhs)
                report = solve_problem(problem, tol=args.tol)
                hyp = check_global_hypotheses(problem)
                u = report.solution
                max_resid, count = "", 0
                if hyp.residual_verifiable:
                    worst = None
                    for n in range(u.k_min + 1, u.k_max - 2):
                        try:
                            est = residual(u, problem, n, tol=max(args.tol * 100.0, 1e-9))
                        except IndeterminateResidualError:
                            continue
                        count += 1
                        if worst is None or abs(est.value) > worst:
                            worst = abs(est.value)
                    max_resid = _fmt(worst) if worst is not None else ""
                row += (f",{report.local_radius_N},{report.k_min},{u.k_max},"
                        f"{report.picard_iterations},{max_resid},{count},"
                        f"{_fmt(report.truncation_budget)},ok")
            except (DomainError, MetadataError) as err:
                row += f",,,,,,,,precondition: {type(err).__name__}"
            except (NonConvergenceError, BudgetError) as err:
                row += f",,,,,,,,failure: {type(err).__name__}"
            lines.append(row)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        for line in lines:
            print(line)
    return EXIT_OK


# -- entry point ---------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="padic-radial",
                                  description="Radial calculus over the p-adic numbers")
    sub = top.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="kernel and bound constants")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--sigma", type=float, default=None)
    c.add_argument("--gamma", type=float, default=None)
    c.add_argument("--nmax", type=int, default=20)
    c.set_defaults(func=cmd_constants)

    a = sub.add_parser("apply", help="apply D^alpha or I^alpha to a radial function file")
    a.add_argument("--op", required=True)
    a.add_argument("--alpha", type=float, required=True)
    a.add_argument("--input", required=True)
    a.add_argument("--levels", default="0")
    a.set_defaults(func=cmd_apply)

    s = sub.add_parser("solve", help="solve a degenerate Cauchy problem")
    s.add_argument("--config", default=None)
    s.add_argument("--p", type=int, default=None)
    s.add_argument("--alpha", type=float, default=None)
    s.add_argument("--gamma", type=float, default=None)
    s.add_argument("--u0", type=float, default=None)
    s.add_argument("--rhs", default=None)
    s.add_argument("--rhs-amplitude", dest="rhs_amplitude", type=float, default=None)
    s.add_argument("--rhs-beta", dest="rhs_beta", type=float, default=None)
    s.add_argument("--tol", type=float, default=None)
    s.add_argument("--max-iter", dest="max_iter", type=int, default=None)
    s.add_argument("--n-override", dest="n_override", type=int, default=None)
    s.add_argument("--extend-to", dest="extend_to", type=int, default=None)
    s.add_argument("--buffer", type=int, default=None)
    s.add_argument("--csv-out", dest="csv_out", default=None)
    s.add_argument("--report-out", dest="report_out", default=None)
    s.add_argument("--solution-out", dest="solution_out", default=None)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="run the verification suites")
    v.add_argument("--suite", default="all")
    v.add_argument("--depth", type=int, default=200)
    v.add_argument("--family", default="all")
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("sweep", help="solve a (p, alpha, gamma) grid")
    w.add_argument("--p-list", dest="p_list", default="2,3,5")
    w.add_argument("--alpha-list", dest="alpha_list", default="0.5,1,2")
    w.add_argument("--gamma-frac", dest="gamma_frac", type=float, default=0.4)
    w.add_argument("--u0", type=float, default=1.0)
    w.add_argument("--rhs", default="cos-decay")
    w.add_argument("--rhs-amplitude", dest="rhs_amplitude", type=float, default=0.1)
    w.add_argument("--rhs-beta", dest="rhs_beta", type=float, default=2.0)
    w.add_argument("--tol", type=float, default=1e-10)
    w.add_argument("--out", default=None)
    w.set_defaults(func=cmd_sweep)
    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, MetadataError, MagnitudeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (NonConvergenceError, BudgetError, IndeterminateResidualError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
