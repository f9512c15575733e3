"""Command-line front end.

Exit codes: 0 when every verdict has its expected status, 1 when a theorem
check fails, 2 for bad input.  ``MODCOH_BOX`` sets the default box radius.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field

from .cech import (
    CechComplex,
    affine_space,
    blowup_bundle,
    blowup_cover,
    divisor_multiplicities,
    modulus_bundle,
    product_with_line,
    projective_box,
    projective_bundle,
)
from .mo import (
    AffineModulusPair,
    membership_sweep,
    mo_contains,
    mo_generator,
    pair_from_spec,
    pair_to_spec,
)
from .poly import CoeffRing, NotDivisibleError, ParseError, UnsupportedRingError
from .theorems import EXPECTED, THEOREM_IDS, run_suite
from .verdict import Box

EXIT_OK, EXIT_FAILED, EXIT_BAD_INPUT = 0, 1, 2
DEFAULT_BOX = 6
COUNTEREXAMPLES = ("flatbc", "gabber", "nonreduced")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    fmt: str = "text"
    box: str | None = None
    seed: int = 0
    workers: int = 1
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        # workers is left out: reports must not depend on the schedule
        return {"command": self.command, "box": self.box, "seed": self.seed, "params": self.params}


def default_box_radius() -> int:
    raw = os.environ.get("MODCOH_BOX")
    if raw is None or not raw.strip():
        return DEFAULT_BOX
    try:
        return _radius(raw)
    except InputError as exc:
        raise InputError(f"MODCOH_BOX: {exc}") from None


def _radius(text: str) -> int:
    text = text.strip()
    if not re.fullmatch(r"\d+", text):
        raise InputError(f"expected a nonnegative box radius, got {text!r}")
    return int(text)


def parse_box(text: str | None, dim: int) -> Box:
    """'6' is the cube [-6, 6]^dim; 'a..b' is [a, b]^dim; 'a..b,c..d' per coordinate."""
    if text is None:
        return Box.symmetric(dim, default_box_radius())
    text = text.strip()
    if re.fullmatch(r"\d+", text):
        return Box.symmetric(dim, int(text))
    parts = [p.strip() for p in text.split(",")]
    ivs = []
    for p in parts:
        m = re.fullmatch(r"(-?\d+)\s*\.\.\s*(-?\d+)", p)
        if not m:
            raise InputError(f"bad box {text!r}: use N, a..b, or a..b,c..d,...")
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi:
            raise InputError(f"empty interval {p!r}")
        ivs.append((lo, hi))
    if len(ivs) == 1:
        ivs = ivs * dim
    if len(ivs) != dim:
        raise InputError(f"box has {len(ivs)} intervals, expected {dim}")
    return Box(tuple(ivs))


def _box_radius(text: str | None) -> int:
    if text is None:
        return default_box_radius()
    return _radius(text)


def _emit(payload: dict, text: str, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


# ---------------------------------------------------------------- mo


def _pair_from_args(args) -> AffineModulusPair:
    if args.spec:
        try:
            with open(args.spec, encoding="utf-8") as fh:
                return pair_from_spec(fh.read())
        except OSError as exc:
            raise InputError(f"cannot read {args.spec}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.spec}: invalid JSON (line {exc.lineno}, column {exc.colno})") from None
    if args.ring is None or args.f is None:
        raise InputError("give --ring and --f, or --spec")
    return AffineModulusPair.parse(args.ring, args.f, args.invertible or (), args.coeffs)


def cmd_mo(args, config: RunConfig) -> int:
    pair = _pair_from_args(args)
    config.params = {"pair": pair_to_spec(pair)}
    lines = [f"pair: {pair}"]
    payload: dict = {"config": config.to_dict(), "pair": pair_to_spec(pair)}
    if pair.ring.coeffs is CoeffRing.RATIONALS:
        gen = mo_generator(pair)
        payload["generator"] = str(gen.generator)
        lines.append(f"generator: {gen.generator}")
    else:
        payload["generator"] = None
        lines.append("generator: none (closed form needs rational coefficients)")
    tests = []
    for text in args.test or ():
        elem = pair.parse_element(text)
        if elem is None:
            tests.append({"element": text, "member": False, "note": "not in A[1/f]"})
            lines.append(f"{text}: not a member (not in A[1/f])")
            continue
        member = mo_contains(pair, elem, args.n_bound)
        tests.append({"element": text, "canonical": str(elem), "member": member})
        lines.append(f"{text}: {'member' if member else 'not a member'}")
    payload["tests"] = tests
    if args.random:
        v = membership_sweep(args.random, config.seed)
        payload["sweep"] = v.to_dict()
        lines.append(f"random sweep: {args.random} instances, seed {config.seed}, "
                     f"{v.details['members']} members, methods agree")
    _emit(payload, "\n".join(lines), config.fmt)
    return EXIT_OK


# ---------------------------------------------------------------- cech


def cmd_cech(args, config: RunConfig) -> int:
    if args.n < 0 or (args.space != "product" and args.n < 1):
        raise InputError(f"--n must be at least 1 for {args.space}")
    if args.space == "pn":
        bundle = projective_bundle(args.n, args.twist)
        box = projective_box(args.n, args.twist) if args.box is None else parse_box(args.box, args.n + 1)
    elif args.space == "blowup":
        bundle = blowup_bundle(args.n, args.twist, blowup_cover(args.n))
        box = parse_box(args.box, args.n + 1)
    else:
        variables = [f"x{j}" for j in range(1, args.n + 1)]
        pair = AffineModulusPair.parse(variables, args.f)
        if not pair.f.is_monomial():
            raise InputError("--f must be a monomial for the product space")
        space = product_with_line(affine_space(variables))
        mults = divisor_multiplicities(space, dict(zip(variables, pair.f.exponent())))
        mults[f"{space.variables[-1]}_inf"] = args.twist
        bundle = modulus_bundle(space, mults)
        box = parse_box(args.box, args.n + 1)
    config.params = {"space": args.space, "n": args.n, "twist": args.twist}
    report = CechComplex(bundle, box).report(config.workers)
    payload = {"config": config.to_dict(), "report": report.to_dict()}
    _emit(payload, report.to_text(), config.fmt)
    return EXIT_OK


# ---------------------------------------------------------------- verify


def cmd_verify(args, config: RunConfig, default_ids=THEOREM_IDS) -> int:
    ids = list(args.ids or [])
    unknown = [i for i in ids if i not in EXPECTED]
    if unknown:
        raise InputError(f"unknown theorem id(s): {', '.join(unknown)}; choose from {', '.join(THEOREM_IDS)}")
    if args.all or not ids:
        ids = list(default_ids)
    radius = _box_radius(args.box)
    config.params = {"ids": sorted(ids), "box_radius": radius}
    result = run_suite(ids, radius, config.workers)
    payload = {"config": config.to_dict()} | result.to_dict(timing=args.timing)
    lines = []
    for v in result.verdicts:
        mark = "ok " if v.status == EXPECTED[v.theorem] else "BAD"
        line = f"[{mark}] {v.summary()}"
        if args.timing:
            line += f"  ({v.seconds:.2f}s)"
        lines.append(line)
        if v.theorem == "gabber" and "h1_O_E" in v.details:
            lines.append(f"      dim H^1(E, O_E) = {v.details['h1_O_E']}")
    lines.append("all verdicts as expected" if result.ok else
                 f"{len(result.unexpected())} unexpected verdict(s)")
    _emit(payload, "\n".join(lines), config.fmt)
    return EXIT_OK if result.ok else EXIT_FAILED


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps (recorded in reports)")
    common.add_argument("--workers", type=int, default=1, help="processes for per-slice cohomology (0 = all cores)")

    parser = argparse.ArgumentParser(prog="modcoh", description="Filtered structure sheaf and Cech cohomology checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mo", parents=[common], help="generator and membership for MO(A, f)")
    p.add_argument("--ring", help="comma-separated variables, e.g. 'x,y'")
    p.add_argument("--f", help="modulus as a product of powers, e.g. 'x^3*y^2'")
    p.add_argument("--invertible", nargs="*", help="variables that are inverted in A")
    p.add_argument("--coeffs", default="QQ", help="QQ or dual")
    p.add_argument("--spec", help="JSON pair specification file")
    p.add_argument("--test", action="append", help="element to test for membership (repeatable)")
    p.add_argument("--n-bound", type=int, default=None, help="power bound for the search over dual numbers")
    p.add_argument("--random", type=int, default=0, help="run N random dual-method agreement checks")
    p.set_defaults(func=cmd_mo)

    p = sub.add_parser("cech", parents=[common], help="Cech cohomology of a monomial line bundle")
    p.add_argument("space", choices=("pn", "blowup", "product"))
    p.add_argument("--n", type=int, default=1, help="dimension parameter")
    p.add_argument("--twist", type=int, default=0, help="O(d) on P^n, O(i) on the blowup, multiplicity at infinity for product")
    p.add_argument("--f", default="1", help="monomial modulus on A^n for the product space")
    p.add_argument("--box", help="N, a..b, or per-coordinate a..b,c..d (default: derived for pn, else MODCOH_BOX or 6)")
    p.set_defaults(func=cmd_cech)

    for name, helptext, ids in (("verify", "run theorem checkers", THEOREM_IDS),
                                ("counterexamples", "run the counterexample checkers", COUNTEREXAMPLES)):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("ids", nargs="*", help=f"theorem ids ({', '.join(THEOREM_IDS)})")
        p.add_argument("--all", action="store_true", help="run every checker in scope")
        p.add_argument("--box", help="box radius (default MODCOH_BOX or 6)")
        p.add_argument("--timing", action="store_true", help="include timings (output then varies between runs)")
        p.set_defaults(func=lambda a, c, ids=ids: cmd_verify(a, c, ids))
    return parser


def _glue_box(argv: list[str]) -> list[str]:
    """Let '--box -4..4' through: argparse would read '-4..4' as an option."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--box":
            nxt = next(it, None)
            out.append("--box" if nxt is None else f"--box={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_box(argv))
    config = RunConfig(args.command, args.format, getattr(args, "box", None), args.seed, args.workers)
    try:
        return args.func(args, config)
    except ParseError as exc:
        print(f"modcoh: parse error: {exc}", file=sys.stderr)
    except (InputError, ValueError, UnsupportedRingError, NotDivisibleError) as exc:
        print(f"modcoh: {exc}", file=sys.stderr)
    return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
