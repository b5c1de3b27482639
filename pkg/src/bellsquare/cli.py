"""Command-line entry point: simulate, verify, analyze, inspect, serve.

Exit codes: 0 all checks/rounds clean, 1 a check failed or a rule was
violated, 2 usage error.  All output is deterministic given the flags (no
timestamps, no unseeded randomness), so identical invocations are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import classical, experiment, magic_square, quantum
from .quantum import ATOL, Party
from .magic_square import SETTINGS, Setting, Variant


def _variant(name: str) -> Variant:
    return Variant.SIGNED_SYMMETRIC if name == "signed" else Variant.STANDARD


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellsquare",
        description="Exact simulator and analyzer for the two-observer "
        "magic-square demonstration of Bell's theorem.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a batch of rounds")
    run.add_argument("--rounds", type=int, default=1000)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--policy", default="random",
                     help='"random", "fixed:<A>:<B>" (e.g. fixed:R1:C2), or "cleve"')
    run.add_argument("--variant", choices=["standard", "signed"], default="standard")
    run.add_argument("--format", choices=["table", "json"], default="table")

    verify = sub.add_parser("verify", help="check the operator identities and symmetries")
    verify.add_argument("--variant", choices=["standard", "signed"], default="standard")

    classical_cmd = sub.add_parser("classical", help="hidden-variable enumeration and game values")
    classical_cmd.add_argument("--variant", choices=["standard", "signed"], default="standard")
    classical_cmd.add_argument("--format", choices=["table", "json"], default="table")

    eigen = sub.add_parser("eigen", help="print a setting's simultaneous eigenbasis")
    eigen.add_argument("--setting", default="all",
                       choices=["all"] + [s.value for s in SETTINGS])
    eigen.add_argument("--variant", choices=["standard", "signed"], default="standard")

    serve = sub.add_parser("serve", help="host the HTTP API")
    serve.add_argument("--listen", default="127.0.0.1:8080", help="host:port")
    serve.add_argument("--journal", default=None, help="append-only JSONL round journal")

    return parser


def cmd_run(args) -> int:
    try:
        policy = experiment.parse_policy(args.policy)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if args.rounds < 1:
        print("error: --rounds must be >= 1", file=sys.stderr)
        return 2
    if args.seed < 0:
        print("error: --seed must be a nonnegative 64-bit integer", file=sys.stderr)
        return 2
    variant = _variant(args.variant)
    report = experiment.run_batch(
        args.rounds, policy, variant, seed=args.seed, keep_records=args.format == "json"
    )
    if args.format == "json":
        print(json.dumps(report.to_json_dict(), indent=2))
    else:
        print(f"rounds              {report.rounds}")
        print(f"seed                {report.seed}")
        print(f"policy              {experiment.policy_label(policy)}")
        print(f"variant             {variant.value}")
        print(f"parity violations   {report.parity_violations}")
        print(f"correlation viol.   {report.correlation_violations}")
        print()
        print("outcome frequencies (valid triples, G=green, R=red)")
        for party in ("alice", "bob"):
            print(f"  {party}:")
            for s in SETTINGS:
                uses = report.uses[party][s.value]
                cells = "  ".join(
                    f"{key}:{count/uses:.4f}" if uses else f"{key}:-"
                    for key, count in report.counts[party][s.value].items()
                )
                print(f"    {s.value}  uses={uses:<6d} {cells}")
    return 0 if report.parity_violations == 0 and report.correlation_violations == 0 else 1


def _verify_checks(variant: Variant):
    """Yield (name, passed, details) for every algebraic identity check."""
    alice_sq = magic_square.square(variant, Party.ALICE)
    bob_sq = magic_square.square(variant, Party.BOB)

    expected = {s: (1 if s.is_row else -1) for s in SETTINGS}
    if variant is Variant.STANDARD:
        expected = {s: (-1 if s is Setting.C3 else 1) for s in SETTINGS}
    signs = magic_square.product_check(alice_sq)
    yield (
        "row/column product signs",
        signs == expected and magic_square.product_check(bob_sq) == expected,
        " ".join(f"{s.value}:{signs[s]:+d}" for s in SETTINGS),
    )

    residual = max(
        max(magic_square.product_residuals(sq).values()) for sq in (alice_sq, bob_sq)
    )
    yield "products equal sign*I", residual < ATOL, f"max residual {residual:.2e}"

    commuting = magic_square.commuting_triples_ok(alice_sq) and magic_square.commuting_triples_ok(bob_sq)
    yield "settings are commuting triples", commuting, "all 6 settings, both parties"

    herm = invol = 0.0
    for sq in (alice_sq, bob_sq):
        for row in sq.cells:
            for obs in row:
                m = quantum.embed_observable(obs)
                herm = max(herm, float(np.max(np.abs(m - m.conj().T))))
                invol = max(invol, float(np.max(np.abs(m @ m - np.eye(16)))))
    yield "cells Hermitian and involutory", max(herm, invol) < ATOL, \
        f"max |M-M*|={herm:.2e} |M^2-I|={invol:.2e}"

    ortho = completeness = imag = 0.0
    for s in SETTINGS:
        basis = magic_square.simultaneous_eigenbasis(alice_sq, s)
        vectors = np.array([v.coefficients for v in basis.vectors])
        ortho = max(ortho, float(np.max(np.abs(vectors.conj() @ vectors.T - np.eye(4)))))
        projectors = sum(np.outer(v, v.conj()) for v in vectors)
        completeness = max(completeness, float(np.max(np.abs(projectors - np.eye(4)))))
        imag = max(imag, float(np.max(np.abs(vectors.imag))))
    yield "eigenbases orthonormal", ortho < ATOL, f"max Gram deviation {ortho:.2e}"
    yield "eigenbases complete", completeness < ATOL, f"max resolution deviation {completeness:.2e}"
    yield "eigenvector coefficients real", imag < ATOL, f"max |imag| {imag:.2e}"

    reconstruction = max(
        magic_square.biorthogonal_decomposition_check(s, variant) for s in SETTINGS
    )
    yield "biorthogonal reconstruction", reconstruction < ATOL, f"max error {reconstruction:.2e}"

    signaling = max(experiment.no_signaling_check(s, variant) for s in SETTINGS)
    yield "no-signaling", signaling < ATOL, f"max marginal deviation {signaling:.2e}"

    order_dev = max(
        experiment.measurement_order_deviation(s, party, variant)
        for s in SETTINGS
        for party in Party
    )
    yield "measurement-order independence", order_dev < ATOL, f"max deviation {order_dev:.2e}"

    party_dev = max(
        experiment.party_order_deviation(sa, sb, variant) for sa in SETTINGS for sb in SETTINGS
    )
    yield "party-order independence", party_dev < ATOL, f"max deviation {party_dev:.2e}"


def cmd_verify(args) -> int:
    variant = _variant(args.variant)
    all_ok = True
    for name, ok, details in _verify_checks(variant):
        all_ok &= ok
        print(f"[{'PASS' if ok else 'FAIL'}] {name:<34s} {details}")
    if variant is Variant.SIGNED_SYMMETRIC:
        masks = magic_square.find_symmetric_masks()
        cells = "; ".join(
            "+".join(f"({r + 1},{c + 1})" for r, c in mask) for mask in masks
        )
        print(f"note: negated last-row cells achieving rows +I / columns -I: {cells}")
        print("note: negating the last row's 2nd and 3rd cells instead would leave "
              "column products at {+1,-1,+1}")
    return 0 if all_ok else 1


def cmd_classical(args) -> int:
    variant = _variant(args.variant)
    enumeration = classical.enumerate_colorings(variant)
    reports = [
        classical.classical_game_value(game, variant)
        for game in (classical.Game.THREE_BY_THREE, classical.Game.SIX_BY_SIX)
    ]
    if args.format == "json":
        print(json.dumps({
            "enumeration": enumeration.to_json_dict(),
            "games": [r.to_json_dict() for r in reports],
        }, indent=2))
        return 0
    print(f"{enumeration.total} colorings, {enumeration.fully_satisfying} satisfy all "
          f"constraints, max satisfied {enumeration.max_satisfied}")
    print("histogram (satisfied -> colorings): "
          + "  ".join(f"{k}:{v}" for k, v in sorted(enumeration.histogram.items())))
    for r in reports:
        print(f"{r.game.value} game: classical {r.classical_value}, quantum {r.quantum_value} "
              f"({r.optimal_strategy_count} optimal strategy pairs)")
    return 0


def cmd_eigen(args) -> int:
    variant = _variant(args.variant)
    sq = magic_square.square(variant, Party.ALICE)
    settings = SETTINGS if args.setting == "all" else (Setting(args.setting),)
    for s in settings:
        labels = " | ".join(o.label() for o in magic_square.setting_observables(sq, s))
        print(f"{s.value}: {labels}")
        basis = magic_square.simultaneous_eigenbasis(sq, s)
        for i, vec in enumerate(basis.vectors, start=1):
            eig = " ".join(f"{e:+d}" for e in vec.eigenvalues)
            coef = "  ".join(f"{c.real:+.6f}" for c in vec.coefficients)
            print(f"  psi_{i}  eigenvalues ({eig})  coefficients [{coef}]")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host, _, port_text = args.listen.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"error: --listen must be host:port, got {args.listen!r}", file=sys.stderr)
        return 2
    try:
        uvicorn.run(create_app(journal_path=args.journal), host=host, port=int(port_text))
    except (OSError, SystemExit) as err:
        print(f"error: could not serve on {args.listen}: {err}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "run": cmd_run,
        "verify": cmd_verify,
        "classical": cmd_classical,
        "eigen": cmd_eigen,
        "serve": cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
