"""Command-line front end: named experiments over the library operations.

Artifact conventions:
  - every CSV starts with a `# tool: noisestab <version>` line, then the
    column header row;
  - files are written once, atomically (temp file + rename);
  - all randomness flows from --seed through named substreams, so outputs
    are byte-identical for identical (inputs, seed, version);
  - exit 0 iff all hard assertions pass.  A reported negative margin is a
    finding, not an assertion failure; internal identity violations
    (BoundViolation) exit 1, budget guards exit 3, bad input exits 2.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .distributions import (
    StepDistribution,
    arrow3,
    correlated_bits,
    f3_chain,
    gaussian_counterpart,
    load_distribution,
    marginals,
    min_atom,
    rho_max,
)
from .errors import (
    BoundViolation,
    BudgetExceededError,
    DegenerateDistributionError,
    DomainError,
    InvalidKernelError,
    PartitionError,
)
from .families import (
    dictator,
    dictator_times_majority,
    majority,
    parity,
    threshold,
    tribes,
)
from .gaussian import arcsine_quadrant, gamma_estimate, halfspace_stability
from .parameters import (
    ConstantsProfile,
    DEFAULT_PROFILE,
    depth_fourier,
    m_beta_three,
    r_alpha_two,
    r_multi,
    tau_general,
    tau_mist,
    tau_two_general,
)
from .resilience import cross_resilient, fourier_support, resilience_defect, support_cost, COST_LIMIT
from .rng import substream
from .stability import multi_correlation, noisy_inner_product, pair_correlation
from .tables import TableFunction, influences, load_function, to_unit_interval, total_influence
from .trees import correlated_tree, fourier_tree, influence_tree, leaf_statistics, tree_to_json_dict
from .verify import (
    check_arrow,
    check_theorem_multi,
    check_theorem_three,
    check_theorem_two,
    guilbaud_constant,
    paradox_probability,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


# -- artifact plumbing -----------------------------------------------------


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as handle:
        handle.write(text)
    os.replace(tmp, path)


def _cell(v) -> str:
    if isinstance(v, float):
        if math.isfinite(v):
            return repr(v)
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    return str(v)


def _write_csv(out_dir: str, name: str, columns, rows) -> str:
    lines = [f"# tool: noisestab {__version__}", ",".join(columns)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    path = os.path.join(out_dir, name)
    _atomic_write(path, "\n".join(lines) + "\n")
    return path


def _jsonable(x):
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {f.name: _jsonable(getattr(x, f.name)) for f in dataclasses.fields(x)}
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating,)):
        x = float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


def _write_json(out_dir: str, name: str, payload: dict) -> str:
    path = os.path.join(out_dir, name)
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True, allow_nan=False)
    _atomic_write(path, text + "\n")
    return path


def _report(args, subcommand: str, tolerances: dict, payload: dict) -> dict:
    return {
        "tool": "noisestab",
        "version": __version__,
        "subcommand": subcommand,
        "seed": args.seed,
        "samples": args.samples,
        "constants": _jsonable(_profile(args)),
        "tolerances": tolerances,
        **payload,
    }


def _profile(args) -> ConstantsProfile:
    if getattr(args, "constants", None):
        path = args.constants
        try:
            with open(path, "r", encoding="utf-8") as handle:
                raw = json.load(handle)
        except json.JSONDecodeError as e:
            raise DomainError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}") from e
        if not isinstance(raw, dict):
            raise DomainError(f"{path}: expected a JSON object of constant names")
        known = {f.name for f in dataclasses.fields(ConstantsProfile)}
        bad = sorted(set(raw) - known)
        if bad:
            raise DomainError(f"{path}: unknown constants {bad}")
        try:
            return ConstantsProfile(**{k: float(v) for k, v in raw.items()})
        except (TypeError, ValueError) as e:
            raise DomainError(f"{path}: {e}") from e
    return DEFAULT_PROFILE


# -- input parsing ---------------------------------------------------------

FAMILY_BUILDERS = {
    "majority": lambda ps: majority(int(ps[0])),
    "dictator": lambda ps: dictator(int(ps[0]), int(ps[1]) if len(ps) > 1 else 1),
    "parity": lambda ps: parity(int(ps[0])),
    "tribes": lambda ps: tribes(int(ps[0]), int(ps[1])),
    "threshold": lambda ps: threshold(int(ps[0]), int(ps[1])),
    "dictator-majority": lambda ps: dictator_times_majority(int(ps[0])),
}


def _load_function_checked(path: str) -> TableFunction:
    try:
        return load_function(path)
    except FileNotFoundError:
        raise DomainError(f"{path}: no such file")
    except json.JSONDecodeError as e:
        raise DomainError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}") from e
    except KeyError as e:
        raise DomainError(f"{path}: missing field {e}") from e
    except DomainError as e:
        raise DomainError(f"{path}: {e}") from e


def _parse_function(spec: str, default_n=None) -> TableFunction:
    """`name:args` for a named family (majority:5, dictator:4:1, tribes:2:3),
    a bare family name with --n, or a path to a function JSON file."""
    if spec.endswith(".json") or os.path.sep in spec or os.path.exists(spec):
        return _load_function_checked(spec)
    parts = spec.split(":")
    name = parts[0]
    if name in FAMILY_BUILDERS:
        ps = parts[1:]
        if not ps:
            if default_n is None:
                raise DomainError(f"family {name} needs an arity: use {name}:N or --n")
            ps = [str(default_n)]
        try:
            return FAMILY_BUILDERS[name](ps)
        except (TypeError, ValueError, IndexError) as e:
            raise DomainError(f"bad family spec {spec!r}: {e}") from e
    raise DomainError(f"unknown function spec {spec!r} (not a file, not a named family)")


def _parse_distribution(spec: str) -> StepDistribution:
    """`correlated-bits:RHO`, `f3-chain`, `arrow3`, or a distribution JSON path."""
    if spec == "f3-chain":
        return f3_chain()
    if spec == "arrow3":
        return arrow3()
    if spec.startswith("correlated-bits:"):
        return correlated_bits(float(spec.split(":", 1)[1]))
    if spec.endswith(".json") or os.path.sep in spec or os.path.exists(spec):
        try:
            return load_distribution(spec)
        except FileNotFoundError:
            raise DomainError(f"{spec}: no such file")
        except json.JSONDecodeError as e:
            raise DomainError(f"{spec}: invalid JSON at line {e.lineno} column {e.colno}") from e
        except KeyError as e:
            raise DomainError(f"{spec}: missing field {e}") from e
    raise DomainError(f"unknown distribution spec {spec!r}")


def _parse_grid(spec: str) -> list[float]:
    """`a:b:step` (inclusive endpoints) or a comma list."""
    if ":" in spec:
        a, b, step = (float(x) for x in spec.split(":"))
        if step <= 0:
            raise DomainError("grid step must be positive")
        count = int(math.floor((b - a) / step + 0.5)) + 1
        return [round(a + i * step, 12) for i in range(count)]
    return [float(x) for x in spec.split(",")]


def _parse_int_list(spec: str) -> list[int]:
    return [int(x) for x in spec.split(",")]


def _as_unit_interval(f: TableFunction) -> tuple[TableFunction, bool]:
    """{0,1} convention for the checks; +-1-valued inputs are converted."""
    vals = np.unique(f.values)
    if np.all(np.isin(vals, (-1.0, 1.0))) and vals.min() < 0:
        return to_unit_interval(f if f.range_tag == "pm_one" else f.with_range_tag("pm_one")), True
    return f, False


# -- subcommands -----------------------------------------------------------


def _cmd_analyze(args) -> int:
    f = _parse_function(args.function, args.n)
    f01, converted = _as_unit_interval(f)
    cert = resilience_defect(f01, args.r, args.alpha)
    inf = influences(f)
    support = None
    if support_cost(f01.n, f01.q, min(args.r, f01.n)) <= COST_LIMIT:
        support = fourier_support(f01, max(args.r, 1), cert.alpha)
    payload = {
        "function": args.function,
        "q": f.q,
        "n": f.n,
        "mean": f.expectation(),
        "variance": f.variance(),
        "influences": inf,
        "total_influence": total_influence(f),
        "unit_interval_converted": converted,
        "mean_unit_interval": f01.expectation(),
        "resilience": cert,
        "fourier_support": support,
    }
    _write_json(args.out, "analyze.json", _report(args, "analyze", {}, payload))
    _write_csv(
        args.out,
        "influences.csv",
        ("coordinate", "influence"),
        [(i + 1, float(v)) for i, v in enumerate(inf)],
    )
    return EXIT_OK


def _cmd_stability(args) -> int:
    f = _parse_function(args.f, args.n)
    g = _parse_function(args.g, args.n) if args.g else f
    f01, _ = _as_unit_interval(f)
    g01, _ = _as_unit_interval(g)
    grid = _parse_grid(args.rho_grid)
    mu_f, mu_g = f01.expectation(), g01.expectation()
    rows = []
    for rho_v in grid:
        ip = noisy_inner_product(f01, g01, rho_v)
        bound = halfspace_stability(mu_f, mu_g, abs(rho_v))
        rows.append((rho_v, ip, bound, bound + args.eps - ip))
    payload = {
        "f": args.f,
        "g": args.g or args.f,
        "mu_f": mu_f,
        "mu_g": mu_g,
        "eps": args.eps,
        "rows": [
            {"rho": r0, "inner_product": r1, "halfspace": r2, "margin": r3}
            for (r0, r1, r2, r3) in rows
        ],
    }
    if args.distribution:
        P = _parse_distribution(args.distribution)
        corr = rho_max(P)
        payload["distribution"] = {
            "spec": args.distribution,
            "pair_correlation": pair_correlation(f, g, P),
            "rho_max": corr.rho,
            "degenerate": corr.degenerate,
        }
    _write_json(args.out, "stability.json", _report(args, "stability", {}, payload))
    _write_csv(
        args.out,
        "stability.csv",
        ("rho", "inner_product", "halfspace", "margin"),
        rows,
    )
    return EXIT_OK


def _cmd_gauss(args) -> int:
    grid = _parse_grid(args.rho_grid)
    balanced = args.mu1 == 0.5 and args.mu2 == 0.5
    rows = []
    for rho_v in grid:
        value = halfspace_stability(args.mu1, args.mu2, rho_v)
        if balanced:
            closed = arcsine_quadrant(rho_v)
            diff = value - closed
            if abs(diff) > 1e-9:
                raise BoundViolation(
                    f"quadrature vs arcsine at rho={rho_v!r}: {value!r} vs {closed!r}"
                )
            rows.append((rho_v, value, closed, diff))
        else:
            rows.append((rho_v, value))
    columns = ("rho", "value", "closed_form", "difference") if balanced else ("rho", "value")
    payload = {
        "mu1": args.mu1,
        "mu2": args.mu2,
        "balanced_closed_form": balanced,
        "rows": [dict(zip(columns, row)) for row in rows],
    }
    _write_json(args.out, "gauss.json", _report(args, "gauss", {"arcsine_match": 1e-9}, payload))
    _write_csv(args.out, "gauss.csv", columns, rows)
    return EXIT_OK


def _cmd_tree(args) -> int:
    if args.kind == "correlated":
        P = _parse_distribution(args.distribution) if args.distribution else correlated_bits(0.5)
        if args.functions:
            F = [_parse_function(s, args.n) for s in args.functions.split(",")]
        else:
            F = [_parse_function(args.function, args.n) for _ in range(P.steps)]
        tree = correlated_tree(F, P, args.tau, args.eps)
    else:
        f = _parse_function(args.function, args.n)
        if args.kind == "influence":
            tree = influence_tree(f, args.tau, args.eps)
        else:
            tree = fourier_tree(f, args.r, args.alpha, args.eps)
    stats = leaf_statistics(tree)
    payload = {
        "kind": args.kind,
        "params": tree.params,
        "statistics": stats,
        "max_depth": tree.max_depth(),
        "bad_mass": tree.bad_mass(),
        "support_verified": tree.support_verified,
        "tree": tree_to_json_dict(tree),
    }
    _write_json(args.out, "tree.json", _report(args, "tree", {"mass": 1e-12}, payload))
    rows = []
    for i, leaf in enumerate(tree.leaves()):
        flags = ";".join(sorted(k for k, v in leaf.flags.items() if v))
        rows.append((i, leaf.depth, float(leaf.mass), float(leaf.leaf_mean), flags))
    _write_csv(args.out, "leaves.csv", ("leaf", "depth", "mass", "mean", "flags"), rows)
    return EXIT_OK


def _cmd_certify(args) -> int:
    f = _parse_function(args.function, args.n)
    f01, converted = _as_unit_interval(f)
    cert = resilience_defect(f01, args.r, args.alpha)
    support = None
    if support_cost(f01.n, f01.q, min(args.r, f01.n)) <= COST_LIMIT and args.r >= 1:
        support = fourier_support(f01, args.r, args.alpha)
    payload = {
        "function": args.function,
        "unit_interval_converted": converted,
        "resilience": cert,
        "fourier_support": support,
    }
    rows = [
        ("r", args.r),
        ("alpha", float(args.alpha)),
        ("defect", float(cert.defect)),
        ("passed", cert.passed),
    ]
    if args.g:
        g = _parse_function(args.g, args.n)
        g01, _ = _as_unit_interval(g)
        cross = cross_resilient(f01, g01, args.r, args.alpha)
        payload["cross"] = {"g": args.g, "report": cross}
        rows.append(("cross_passed", cross.passed))
    _write_json(args.out, "certify.json", _report(args, "certify", {}, payload))
    _write_csv(args.out, "certify.csv", ("quantity", "value"), rows)
    return EXIT_OK


def _cmd_params(args) -> int:
    profile = _profile(args)
    eps, rho_v = args.eps, args.rho
    values: dict[str, float] = {"eps": eps, "rho": rho_v}
    values["tau_mist"] = tau_mist(eps, rho_v, profile)
    r, alpha = r_alpha_two(eps, rho_v, profile)
    values["r_two"] = float(r)
    values["alpha_two"] = alpha
    if math.isfinite(r):
        values["depth_fourier"] = float(depth_fourier(int(r), alpha, eps))
    if args.mu is not None:
        values["tau_two_general"] = tau_two_general(eps, rho_v, args.mu, profile)
    if args.pi_star is not None:
        if args.l is not None:
            values["tau_general"] = tau_general(eps, rho_v, args.pi_star, args.l, profile)
            values["r_multi"] = float(
                r_multi(eps, rho_v, args.l, pi_star=args.pi_star, profile=profile, tau=args.tau)
            )
        m, beta = m_beta_three(eps, rho_v, args.pi_star, profile)
        values["m_three"] = float(m)
        values["beta_three"] = beta
    payload = {"values": values}
    _write_json(args.out, "params.json", _report(args, "params", {}, payload))
    _write_csv(args.out, "params.csv", ("name", "value"), sorted(values.items()))
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.theorem == "two" or args.theorem == "three":
        f = _parse_function(args.f, args.n)
        g = _parse_function(args.g, args.n) if args.g else f
        f01, cf = _as_unit_interval(f)
        g01, cg = _as_unit_interval(g)
        if args.theorem == "two":
            report = check_theorem_two(f01, g01, args.rho, args.eps, args.r, args.alpha)
        else:
            report = check_theorem_three(f01, g01, args.rho, args.eps, args.m, args.beta)
        extra = {"unit_interval_converted": {"f": cf, "g": cg}}
    elif args.theorem == "multi":
        P = _parse_distribution(args.distribution)
        if args.functions:
            F = [_parse_function(s, args.n) for s in args.functions.split(",")]
        else:
            F = [_parse_function(args.f, args.n) for _ in range(P.steps)]
        F01 = []
        converted = []
        for fn in F:
            fn01, c = _as_unit_interval(fn)
            F01.append(fn01)
            converted.append(c)
        report = check_theorem_multi(
            F01, P, args.eps, args.r, samples=args.samples, seed=args.seed
        )
        extra = {"distribution": args.distribution, "unit_interval_converted": converted}
    else:
        f = _parse_function(args.f, args.n)
        g = _parse_function(args.g, args.n) if args.g else f
        h = _parse_function(args.h, args.n) if args.h else f
        report = check_arrow(f, g, h, args.eps, args.m, args.beta)
        extra = {}
    payload = {"theorem": args.theorem, "report": report, **extra}
    _write_json(args.out, "verify.json", _report(args, "verify", {"identity": 1e-10}, payload))
    _write_csv(
        args.out,
        "margins.csv",
        ("theorem", "lhs", "rhs", "margin", "verdict"),
        [(args.theorem, report.lhs, report.rhs, report.margin, report.verdict)],
    )
    return EXIT_OK


def _cmd_arrow(args) -> int:
    ns = _parse_int_list(args.n)
    rows = []
    for n in ns:
        if 6**n > args.budget:
            raise BudgetExceededError(
                f"profile enumeration guard: 6^{n} > budget {args.budget}"
            )
        f = _parse_function(f"{args.family}:{n}")
        rows.append((args.family, n, paradox_probability(f, f, f)))
    g_const = guilbaud_constant()
    rows.append(("guilbaud", "", g_const))
    payload = {
        "family": args.family,
        "arities": ns,
        "rows": [{"family": a, "n": b, "paradox": c} for (a, b, c) in rows[:-1]],
        "guilbaud": g_const,
    }
    _write_json(args.out, "arrow.json", _report(args, "arrow", {"identity": 1e-10}, payload))
    _write_csv(args.out, "arrow.csv", ("family", "n", "paradox"), rows)
    return EXIT_OK


def _cmd_example_f3(args) -> int:
    P = f3_chain()
    n = args.n
    if 12**n > args.budget:
        raise BudgetExceededError(
            f"support enumeration guard: 12^{n} > budget {args.budget} (exact mode needs n <= 7)"
        )
    size = 3**n
    if args.mode == "indicator":
        # indicator of the all-zeros point in each column
        vals = np.zeros(size)
        vals[0] = 1.0
        F = [TableFunction(3, n, vals.copy(), range_tag="unit_interval") for _ in range(3)]
    elif args.mode == "constant":
        consts = (0.25, 0.5, 0.75)
        F = [
            TableFunction(3, n, np.full(size, c), range_tag="unit_interval")
            for c in consts
        ]
    else:
        rng = substream(args.seed, "example-f3")
        F = [
            TableFunction(
                3, n, (rng.random(size) < 0.5).astype(float), range_tag="unit_interval"
            )
            for _ in range(3)
        ]
    lhs = multi_correlation(F, P)
    if args.mode == "constant":
        want = float(np.prod([f.values[0] for f in F]))
        if abs(lhs - want) > 1e-12:
            raise BoundViolation(f"constant product identity: {lhs!r} vs {want!r}")
    margs = marginals(P)
    mu = [f.with_measure(margs[j]).expectation() for j, f in enumerate(F)]
    est = gamma_estimate(mu, gaussian_counterpart(P), samples=args.samples, seed=args.seed)
    payload = {
        "mode": args.mode,
        "n": n,
        "mu": mu,
        "lhs_exact": lhs,
        "gamma_estimate": est,
        "estimate_plus_half_width": est.value + est.half_width,
        "rho_max": rho_max(P).rho,
        "min_atom": min_atom(P),
    }
    _write_json(
        args.out, "example-f3.json", _report(args, "example-f3", {"product": 1e-12}, payload)
    )
    _write_csv(
        args.out,
        "example-f3.csv",
        ("mode", "n", "lhs_exact", "estimate", "half_width"),
        [(args.mode, n, lhs, est.value, est.half_width)],
    )
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisestab",
        description="Noise stability bounds under resilience: analyses, certificates, experiments.",
    )
    parser.add_argument("--version", action="version", version=f"noisestab {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=".", help="output directory (created if missing)")
    common.add_argument("--seed", type=int, default=0, help="master seed for all substreams")
    common.add_argument("--samples", type=int, default=200_000, help="Monte Carlo sample count")
    common.add_argument("--budget", type=int, default=10**8, help="exact enumeration budget (ops)")
    common.add_argument("--constants", default=None, help="ConstantsProfile JSON file")

    def arity_flag(sp):
        sp.add_argument("--n", type=int, default=None, help="default arity for bare family names")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="influences, mean, resilience defect")
    p.add_argument("--family", "--function", dest="function", required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.0)
    arity_flag(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("stability", parents=[common], help="noisy inner products vs half-space bound")
    p.add_argument("--f", required=True)
    p.add_argument("--g", default=None)
    p.add_argument("--rho-grid", default="0:0.9:0.1")
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--distribution", default=None)
    arity_flag(p)
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("gauss", parents=[common], help="half-space stability table")
    p.add_argument("--mu1", type=float, required=True)
    p.add_argument("--mu2", type=float, required=True)
    p.add_argument("--rho-grid", default="0:0.9:0.1")
    p.set_defaults(func=_cmd_gauss)

    p = sub.add_parser("tree", parents=[common], help="decision-tree regularity constructions")
    p.add_argument("--kind", choices=("influence", "correlated", "fourier"), required=True)
    p.add_argument("--family", "--function", dest="function", default=None)
    p.add_argument("--functions", default=None, help="comma list for correlated trees")
    p.add_argument("--distribution", default=None)
    p.add_argument("--tau", type=float, default=0.1)
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.25)
    arity_flag(p)
    p.set_defaults(func=_cmd_tree)

    p = sub.add_parser("certify", parents=[common], help="resilience and cross-resilience certificates")
    p.add_argument("--family", "--function", dest="function", required=True)
    p.add_argument("--g", default=None)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    arity_flag(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("params", parents=[common], help="certified parameter formulas")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--pi-star", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.set_defaults(func=_cmd_params)

    p = sub.add_parser("verify", parents=[common], help="check one stability statement")
    p.add_argument("--theorem", choices=("two", "multi", "three", "arrow"), required=True)
    p.add_argument("--f", default=None)
    p.add_argument("--g", default=None)
    p.add_argument("--h", default=None)
    p.add_argument("--functions", default=None)
    p.add_argument("--distribution", default=None)
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--beta", type=float, default=0.2)
    arity_flag(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("arrow", parents=[common], help="paradox probabilities vs the Guilbaud constant")
    p.add_argument("--family", choices=("majority", "dictator", "parity"), default="majority")
    p.add_argument("--n", type=str, default="3,5,7", help="comma list of arities, e.g. 3,5,7,9")
    p.set_defaults(func=_cmd_arrow)

    p = sub.add_parser("example-f3", parents=[common], help="three-step chain over the 3-element alphabet")
    p.add_argument("--mode", choices=("indicator", "constant", "random"), default="indicator")
    p.add_argument("--n", type=int, default=1, help="coordinates per column (exact mode needs n <= 7)")
    p.set_defaults(func=_cmd_example_f3)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.theorem in ("two", "three") and not args.f:
        parser.error("verify --theorem two/three needs --f")
    if args.command == "verify" and args.theorem == "multi" and not (args.f or args.functions):
        parser.error("verify --theorem multi needs --f or --functions")
    if args.command == "verify" and args.theorem == "multi" and not args.distribution:
        parser.error("verify --theorem multi needs --distribution")
    if args.command == "verify" and args.theorem == "arrow" and not args.f:
        args.f = f"majority:{args.n or 3}"
    if args.command == "tree" and args.kind != "correlated" and not args.function:
        parser.error("tree needs --function (or --family)")
    if args.command == "tree" and args.kind == "correlated" and not (args.function or args.functions):
        parser.error("correlated tree needs --function or --functions")
    os.makedirs(args.out, exist_ok=True)
    try:
        return args.func(args)
    except BudgetExceededError as e:
        print(f"noisestab: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except BoundViolation as e:
        print(f"noisestab: bound violation: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    except (
        DomainError,
        PartitionError,
        InvalidKernelError,
        DegenerateDistributionError,
        OSError,
    ) as e:
        print(f"noisestab: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
