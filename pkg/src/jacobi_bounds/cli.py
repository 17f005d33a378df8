"""Command line interface.

Subcommands:

* ``spectrum <specfile>``            - certified spectrum as JSON
* ``verify <specfile> ...``          - evaluate bounds, exit 0 iff all hold
* ``lemmas <specfile> ...``          - partial-sum majorization reports
* ``search ...``                     - hill-climb the ratio of one bound
* ``ensemble --config <file>``       - full seeded verification campaign
* ``constants ...``                  - print the bound constants on a grid

Exit codes: 0 success (and, for verify/ensemble, every bound holds),
1 bound violation or runtime error, 2 malformed spec/config file,
3 uncertified spectrum or eigensolver failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds, harness, lemmas
from .bounds import TheoremId, round12
from .eigen import ConvergenceError
from .operators import Jacobi1D, SpecFormatError, load_spec
from .regions import Branch

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_BAD_SPEC = 2
EXIT_UNCERTIFIED = 3


def _load(path: str):
    try:
        return load_spec(path)
    except FileNotFoundError:
        raise SpecFormatError("<file>", f"no such file: {path}")


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------


def _cmd_spectrum(args) -> int:
    spec = _load(args.specfile)
    spectrum = bounds.spectrum_for(spec)
    payload = [
        {
            "re": round12(d["re"]),
            "im": round12(d["im"]),
            "mult": d["mult"],
            "residual": round12(d["residual"]),
        }
        for d in spectrum.to_json_dicts()
    ]
    print(_canonical(payload))
    if not spectrum.certified:
        print("spectrum is uncertified: residuals exceed the tolerance", file=sys.stderr)
        return EXIT_UNCERTIFIED
    return EXIT_OK


def _cmd_verify(args) -> int:
    spec = _load(args.specfile)
    if not bounds.spectrum_for(spec).certified:
        print("spectrum is uncertified; refusing to report bounds", file=sys.stderr)
        return EXIT_UNCERTIFIED
    theorems = (
        [TheoremId(t) for t in args.theorems]
        if args.theorems
        else list(bounds.applicable_theorems(spec))
    )
    reports = []
    for tid in theorems:
        for p in args.p:
            if bounds.uses_alpha(tid):
                for alpha in args.alpha:
                    if alpha < 0 and tid in (TheoremId.T02_halfpow, TheoremId.T02_pow):
                        continue
                    reports.append(bounds.evaluate(tid, spec, p, alpha=alpha))
            elif bounds.uses_theta(tid):
                for theta in args.theta:
                    reports.append(bounds.evaluate(tid, spec, p, theta=theta))
                    reports.append(
                        bounds.evaluate(tid, spec, p, theta=theta, route="tilted")
                    )
            else:
                reports.append(bounds.evaluate(tid, spec, p))
    reports.sort(key=lambda r: (-r.ratio, r.theorem_id.value, r.p))
    print(bounds.reports_to_json(reports))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(bounds.reports_to_csv(reports))
    return EXIT_OK if all(r.holds for r in reports) else EXIT_VIOLATION


def _cmd_lemmas(args) -> int:
    spec = _load(args.specfile)
    out = []
    for alpha in args.alpha_grid:
        for branch in (Branch.PLUS, Branch.MINUS):
            rep = lemmas.lemma1_check(spec, alpha, branch, n_max=args.n_max)
            out.append(dict(rep.to_json_dict(), lemma=1))
        for p in args.p:
            l2 = lemmas.lemma2_check(spec, alpha, p, n_max=args.n_max)
            for rep in l2.reports():
                out.append(dict(rep.to_json_dict(), lemma=2))
    print(_canonical(out))
    return EXIT_OK


def _cmd_search(args) -> int:
    if args.start:
        start = _load(args.start)
    else:
        start = Jacobi1D(b=(2.0,))
    state = harness.sharpness_search(
        start,
        TheoremId(args.theorem),
        p=args.p,
        alpha=args.alpha,
        theta=args.theta,
        budget=args.budget,
        seed=args.seed,
        magnitude_cap=args.cap,
        real_only=args.real_only or None,
    )
    print(harness.search_to_json(state))
    return EXIT_OK


def _cmd_ensemble(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecFormatError("<root>", f"invalid JSON: {exc}")
    cfg = harness.EnsembleConfig.from_dict(data)
    entries = harness.run_campaign(cfg, workers=args.workers)
    payload = harness.campaign_to_json(entries)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        print(payload)
    if args.csv:
        reports = [r for e in entries for r in e.reports]
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(bounds.reports_to_csv(reports))
    violations = harness.campaign_violations(entries)
    total = sum(len(e.reports) for e in entries)
    print(
        f"{len(entries)} spec evaluations, {total} reports, "
        f"{len(violations)} violations",
        file=sys.stderr,
    )
    return EXIT_OK if not violations else EXIT_VIOLATION


def _cmd_constants(args) -> int:
    for p in args.p_grid:
        print(f"c_p(p={p:g}) = {round12(bounds.c_p(p))}")
    for p in args.p_grid:
        for theta in args.theta_grid:
            c1, c2 = bounds.angular_constants(p, theta)
            print(
                f"angular(p={p:g}, theta={theta:g}): c1 = {round12(c1)}, c2 = {round12(c2)}"
            )
    for p in args.p_grid:
        for nu in args.nu:
            print(
                f"L_cl(p={p:g}, nu={nu}) = {round12(bounds.semiclassical_L(p, nu))}"
            )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jacobi-bounds",
        description="Spectral power-sum bounds for complex Jacobi operators",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="certified spectrum of a spec file")
    sp.add_argument("specfile")
    sp.set_defaults(func=_cmd_spectrum)

    ver = sub.add_parser("verify", help="evaluate bounds on a spec file")
    ver.add_argument("specfile")
    ver.add_argument(
        "--theorems",
        nargs="+",
        choices=[t.value for t in TheoremId],
        help="theorem ids (default: all applicable)",
    )
    ver.add_argument("--p", nargs="+", type=float, default=[1.0])
    ver.add_argument("--alpha", nargs="+", type=float, default=[0.0])
    ver.add_argument("--theta", nargs="+", type=float, default=[0.0])
    ver.add_argument("--csv", help="also write reports as CSV to this path")
    ver.set_defaults(func=_cmd_verify)

    lem = sub.add_parser("lemmas", help="partial-sum majorization checks")
    lem.add_argument("specfile")
    lem.add_argument("--alpha-grid", nargs="+", type=float, default=[0.0])
    lem.add_argument("--p", nargs="+", type=float, default=[1.0])
    lem.add_argument("--n-max", type=int, default=None)
    lem.set_defaults(func=_cmd_lemmas)

    sea = sub.add_parser("search", help="hill-climb the ratio of one bound")
    sea.add_argument("--theorem", required=True, choices=[t.value for t in TheoremId])
    sea.add_argument("--budget", type=int, default=1000)
    sea.add_argument("--seed", type=int, default=0)
    sea.add_argument("--p", type=float, default=1.0)
    sea.add_argument("--alpha", type=float, default=0.0)
    sea.add_argument("--theta", type=float, default=0.0)
    sea.add_argument("--cap", type=float, default=5.0)
    sea.add_argument("--start", help="spec file to start from (default: one real site)")
    sea.add_argument("--real-only", action="store_true")
    sea.set_defaults(func=_cmd_search)

    ens = sub.add_parser("ensemble", help="seeded verification campaign")
    ens.add_argument("--config", required=True)
    ens.add_argument("--json", help="write campaign JSON here instead of stdout")
    ens.add_argument("--csv", help="also write flat CSV of all reports")
    ens.add_argument("--workers", type=int, default=None)
    ens.set_defaults(func=_cmd_ensemble)

    con = sub.add_parser("constants", help="print bound constants on a grid")
    con.add_argument("--p-grid", nargs="+", type=float, default=[1.0])
    con.add_argument("--theta-grid", nargs="+", type=float, default=[0.0])
    con.add_argument("--nu", nargs="+", type=int, default=[1])
    con.set_defaults(func=_cmd_constants)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecFormatError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_BAD_SPEC
    except ConvergenceError as exc:
        print(f"eigensolver failure: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
