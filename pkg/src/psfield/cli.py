"""Command-line front end: ``psfield <subcommand> [action] [flags]``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
errors and violated preconditions.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import (
    __version__,
    _poly,
    acceptance,
    cyclotomic,
    ff_core,
    haar_sim,
    interpretation,
    kummer_as,
    puiseux,
    tournament,
)
from .parallel import default_threads
from .report import Check, RunReport


class UsageError(Exception):
    pass


def _field(q: int | None) -> ff_core.FieldSpec:
    if q is None:
        raise UsageError("--q is required")
    try:
        p, n = ff_core.prime_power(q)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return ff_core.make_field(p, n)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


# -- subcommands -------------------------------------------------------------------


def cmd_field(args, rep: RunReport):
    spec = _field(args.q)
    F = ff_core.field_ops(spec)
    rep.parameters["field"] = ff_core.format_spec(spec)
    mod_ok = spec.n == 1 or _poly.is_irreducible(ff_core.field_ops(ff_core.make_field(spec.p)), list(spec.modulus))
    rep.add(Check("modulus irreducible", mod_ok, {"modulus": list(spec.modulus)}))
    g = F.generator()
    rep.add(
        Check(
            "generator has full order",
            F.element_order(g) == spec.q - 1,
            {"generator": ff_core.format_element(F.elem(g))},
        )
    )
    if args.element is not None:
        x = ff_core.parse_element(args.element, spec)
        rep.add(
            Check(
                "element",
                ff_core.parse_element(ff_core.format_element(x), spec) == x,
                {
                    "element": ff_core.format_element(x),
                    "frobenius": ff_core.format_element(ff_core.frobenius(x)),
                    "trace": ff_core.trace_to_prime(x),
                    "order": 0 if x.is_zero() else F.element_order(x.code),
                },
            )
        )


def cmd_cyclo(args, rep: RunReport):
    if args.action == "units":
        _need(args, "p", "level")
        view = cyclotomic.unit_group_structure(args.p, args.level)
        census = cyclotomic.order_census(args.p, args.level)
        predicted = cyclotomic.predicted_census(view.factors)
        rep.add(
            Check(
                "order census matches structure",
                census == predicted,
                {"factors": list(view.factors), "census": census},
                [] if census == predicted else [predicted],
            )
        )
    else:
        _need(args, "p", "depth")
        base = _field(args.q)
        try:
            system = cyclotomic.build_coherent_roots(args.p, base, args.depth)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        fails = cyclotomic.coherence_failures(system)
        rep.add(
            Check(
                "coherent roots",
                not fails,
                {
                    "tower": [ff_core.format_spec(s) for s in system.tower],
                    "roots": [ff_core.format_element(w) for w in system.roots],
                },
                fails,
            )
        )


def cmd_tournament(args, rep: RunReport):
    action = args.action
    if action == "vandermonde":
        _need(args, "p")
        spec = _field(args.q) if args.q else ff_core.make_field(
            next(q for q in range(args.p + 1, 10**5) if ff_core.is_prime(q) and (q - 1) % args.p == 0)
        )
        try:
            omega = tournament.canonical_omega(spec, args.p)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        rank, basis = tournament.vandermonde_kernel_dim(args.p, omega)
        ok = rank == args.p - 1 and len(basis) == 1 and all(c == ff_core.one(spec) for c in basis[0])
        rep.add(Check("kernel is span(1,...,1)", ok, {"field": ff_core.format_spec(spec), "rank": rank}))
        return
    if action == "obstruction":
        _need(args, "p")
        ob = tournament.p_cycle_obstruction(args.p)
        rep.add(Check("p-cycle moves the held rotation", ob.holds, {"cases": len(ob.cases)}))
        return
    spec = _field(args.q)
    if action == "index":
        _need(args, "p")
        got = tournament.power_index(spec, args.p)
        want = args.p if (spec.q - 1) % args.p == 0 else 1
        rep.add(Check("power index", got == want, {"index": got, "expected": want}))
        return
    if action == "mu2n":
        _need(args, "n")
        try:
            res = tournament.mu2n_tournament(spec, args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        rep.add(Check("coset decomposition", res.decomposition_ok, {"power_subgroup": res.power_subgroup_size}))
        rep.add(_verification_check(res.report))
        return
    _need(args, "p")
    try:
        params = tournament.make_params(spec, args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep.add(_verification_check(tournament.verify_p_tournament(params, args.threads)))


def _verification_check(r) -> Check:
    d = r.to_dict()
    return Check(
        f"tournament on {d['field']} (arity {d['arity']})",
        r.ok,
        {"tuples": d["tuples_checked"], "violations": d["violation_count"]},
        d["violations"],
    )


def cmd_interpret(args, rep: RunReport):
    _need(args, "n")
    base = _field(args.q)
    try:
        ext = interpretation.code_extension(base, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep.parameters["min_poly"] = list(ext.min_poly)
    if args.action == "galois":
        rep.add(Check("Galois group cyclic", interpretation.galois_group_is_cyclic(ext), {"order": ext.n}))
        rep.add(Check("Galois group abelian", interpretation.galois_group_is_abelian(ext)))
        rep.add(Check("Cayley-Hamilton", interpretation.cayley_hamilton_holds(ext)))
        return
    samples = args.trials or 10**5
    res = interpretation.verify_iso_with_direct(ext, samples=samples, seed=args.seed)
    rep.add(
        Check(
            "coded arithmetic matches direct field",
            res.ok,
            {"pairs": res.checked, "exhaustive": res.exhaustive},
            [] if res.ok else [res.witness],
        )
    )


def cmd_kummer(args, rep: RunReport):
    _need(args, "p", "b")
    base = _field(args.q)
    b = ff_core.parse_element(args.b, base)
    depth = 1 if args.depth is None else args.depth
    try:
        chain = kummer_as.build_kummer_chain(base, b, args.p, depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    fails = kummer_as.chain_failures(chain)
    rep.add(
        Check(
            "chain invariants",
            not fails,
            {
                "top": ff_core.format_spec(chain.top),
                "degrees": list(chain.degrees),
                "level_sizes": [len(lv) for lv in chain.levels],
            },
            fails,
        )
    )
    r = base.n  # the q-power Frobenius fixes b
    phi = kummer_as.phi_map(chain, r)
    rep.add(
        Check(
            "phi values",
            kummer_as.phi_power_compatible(chain, r) and kummer_as.phi_quotient_compatible(chain, r),
            {"image": sorted("[" + ",".join(map(str, v)) + "]" for v in phi.image())},
        )
    )
    sig = kummer_as.sigma_fixes_phi(chain, r)
    rep.add(Check("sigma fixes phi", sig.ok, {"checked": sig.checked, "applicable": sig.applicable}, sig.failures))


def cmd_artin_schreier(args, rep: RunReport):
    if args.action == "bridge":
        if args.q is None:
            raise UsageError("--q is required")
        try:
            v = kummer_as.artin_schreier_operator_bridge(args.q, args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        rep.add(
            Check(
                "operator lemma on F^+",
                v.ok,
                {
                    "top": v.top,
                    "a0_size": v.a0_size,
                    "minimal_kernel_exponent": v.minimal_kernel_exponent,
                    "p_subextension_exponent": v.p_subextension_exponent,
                    "kernel_bound": v.kernel_bound,
                    "taus": v.tau_checks,
                },
                v.violations,
            )
        )
        return
    spec = _field(args.q)
    if args.b is not None:
        b = ff_core.parse_element(args.b, spec)
        roots = kummer_as.artin_schreier_solve(spec, b)
        ok = bool(roots) == (ff_core.trace_to_prime(b) == 0) and kummer_as.is_prime_field_coset(roots)
        rep.add(Check("roots", ok, {"roots": [ff_core.format_element(x) for x in roots]}))
        return
    bad, solvable = [], 0
    for b in ff_core.elements(spec):
        roots = kummer_as.artin_schreier_solve(spec, b)
        solvable += bool(roots)
        if bool(roots) != (ff_core.trace_to_prime(b) == 0) or not kummer_as.is_prime_field_coset(roots):
            bad.append(ff_core.format_element(b))
    rep.add(Check("solvable iff trace 0; roots are F_p-cosets", not bad, {"solvable": solvable}, bad))


def cmd_lemma(args, rep: RunReport):
    if args.action == "bridge":
        return cmd_artin_schreier(args, rep)
    trials = 1000 if args.trials is None else args.trials
    fz = kummer_as.operator_lemma_fuzz(args.seed, trials, args.max_group, args.threads)
    d = fz.to_dict()
    rep.add(
        Check(
            "no counterexamples",
            fz.ok,
            {
                "satisfied_instances": d["strict_satisfied"],
                "instances_drawn": d["instances_drawn"],
                "relaxed_pairs": d["relaxed_pairs"],
                "hypothesis_tally": d["hypothesis_tally"],
                "intermediate_failures": d["intermediate_failures"],
            },
            d["counterexamples"],
        )
    )
    rep.add(
        Check(
            "necessity witnesses",
            True,
            {h: len(v) for h, v in fz.witnesses.items()},
            [dict(w, hypothesis=h) for h, ws in d["witnesses"].items() for w in ws[:3]],
        )
    )


def cmd_puiseux(args, rep: RunReport):
    p = 3 if args.p is None else args.p
    depth = 2 if args.depth is None else args.depth
    base = _field(7 if args.q is None else args.q)
    try:
        system = cyclotomic.build_coherent_roots(p, base, depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    samples = 200 if args.trials is None else args.trials
    res = puiseux.verify_commutation(system, depth=depth, samples=samples, seed=args.seed)
    rep.add(
        Check(
            "sigma tau = tau sigma",
            res.ok,
            {"generators": res.generators_checked, "series": res.series_checked, "coefficients": res.coefficient_field},
            res.failures,
        )
    )
    if depth >= 1:
        orbit = puiseux.kummer_orbit_order(system)
        rep.add(Check("tau-orbit of x^(1/p)", orbit == p, {"size": orbit}))
    if args.series is not None:
        s = puiseux.parse_series(args.series, base)
        rep.add(Check("tau(series)", True, {"input": str(s), "tau": str(puiseux.tau_apply(system, s))}))


def cmd_haar(args, rep: RunReport):
    _need(args, "p")
    event = args.event
    try:
        if args.action == "table":
            k_max = 4 if args.level is None else args.level
            t = haar_sim.decay_table(args.p, k_max, event)
            rep.add(Check("decay", t.decay_holds(), {"measures": [str(m) for m in t.measures]}))
            return
        _need(args, "level")
        if args.action == "exact":
            m = haar_sim.exact_event_measure(args.p, args.level, event)
            rep.add(Check("exact measure", True, {"measure": str(m)}))
            if event == "power-fixes" and args.p != 2 and args.level >= 2:
                rep.checks[-1].passed = m == Fraction(1, args.p ** (args.level - 1))
            return
        trials = 10**6 if args.trials is None else args.trials
        if args.action == "uniformity":
            chi = haar_sim.uniformity_chi_square(args.p, args.level, trials, args.seed)
            rep.add(Check("chi-square", chi.ok, {"statistic": round(chi.statistic, 6), "df": chi.df, "critical": round(chi.critical, 6)}))
            return
        est = haar_sim.estimate_event_measure(args.p, args.level, event, trials, args.seed, args.threads)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    d = est.to_dict()
    rep.add(
        Check(
            "estimate within 4 s.e. of exact",
            est.exact is None or est.within(4.0),
            {k: d[k] for k in ("trials", "hits", "estimate", "stderr", "exact", "z")},
        )
    )


def cmd_all(args, rep: RunReport):
    for check in acceptance.run_all(args.seed, args.threads):
        rep.add(check)


COMMANDS = {
    "field": (cmd_field, ["info"]),
    "cyclo": (cmd_cyclo, ["units", "roots"]),
    "tournament": (cmd_tournament, ["verify", "mu2n", "index", "vandermonde", "obstruction"]),
    "interpret": (cmd_interpret, ["iso", "galois"]),
    "kummer": (cmd_kummer, ["chain"]),
    "artin-schreier": (cmd_artin_schreier, ["solve", "bridge"]),
    "lemma": (cmd_lemma, ["fuzz", "bridge"]),
    "puiseux": (cmd_puiseux, ["verify"]),
    "haar": (cmd_haar, ["estimate", "exact", "table", "uniformity"]),
    "all": (cmd_all, ["run"]),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="field size (prime power)")
    common.add_argument("--p", type=int, help="prime")
    common.add_argument("--n", type=int, help="extension degree / exponent")
    common.add_argument("--level", type=int, help="level k of Z/p^k")
    common.add_argument("--depth", type=int, help="tower or chain depth")
    common.add_argument("--trials", type=int, help="samples / trials")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--threads", type=int, default=default_threads())
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--element", help="element literal, e.g. [1,2] or 3")
    common.add_argument("--b", help="element literal for b")
    common.add_argument("--series", help="series literal, e.g. '1*x^(1/3) + [2]*x^(1/2)'")
    common.add_argument("--event", default="power-fixes", choices=haar_sim.EVENTS)
    common.add_argument("--max-group", type=int, default=256)
    parser = argparse.ArgumentParser(prog="psfield", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"psfield {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, actions) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("action", nargs="?", default=actions[0], choices=actions)
    return parser


def run(argv=None, out=None) -> tuple[int, RunReport | None]:
    """Parse ``argv``, run it and print the report; returns (exit code, report)."""
    out = sys.stdout if out is None else out
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    if args.threads < 1:
        print("psfield: error: --threads must be >= 1", file=sys.stderr)
        return 2, None
    params = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("json", "threads", "command") and v is not None
    }
    rep = RunReport(command=argv, parameters=params, seed=args.seed)
    fn = COMMANDS[args.command][0]
    t0 = time.perf_counter()
    try:
        fn(args, rep)
    except (UsageError, ff_core.FieldError) as exc:
        print(f"psfield: error: {exc}", file=sys.stderr)
        return 2, None
    rep.wall_time = time.perf_counter() - t0
    print(rep.to_json() if args.json else rep.to_text(), file=out)
    return (0 if rep.passed else 1), rep


def main(argv=None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
