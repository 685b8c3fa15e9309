"""Command-line front end.

Exit codes: 0 success, 1 a property suite failed, 2 parse error,
3 domain error (not regular, depth or precision exhausted, ...).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .coeff import CoeffRing
from .delta_ops import DeltaContext, evaluate, frobenius
from .dpoly import format_poly, parse, to_json
from .errors import DeltaPrismError, ParseError

EXIT_OK, EXIT_SUITE, EXIT_PARSE, EXIT_DOMAIN = 0, 1, 2, 3


@dataclass(frozen=True)
class SessionConfig:
    prime: int = 2
    precision: int | None = None
    depth: int = 3
    degree: int = 8
    fmt: str = "text"
    seed: int = 0

    def __post_init__(self):
        for name in ("depth", "degree"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.precision is not None and self.precision < 1:
            raise ValueError("precision must be positive")

    @property
    def ring(self) -> CoeffRing:
        return CoeffRing(self.prime, self.precision)

    def context(self) -> DeltaContext:
        return DeltaContext(self.ring, self.depth)


def _emit(config: SessionConfig, text: str, payload) -> None:
    if config.fmt == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _config(args, **overrides) -> SessionConfig:
    values = dict(
        prime=args.prime,
        precision=args.precision,
        depth=args.depth if args.depth is not None else 3,
        degree=args.degree if args.degree is not None else 8,
        fmt=args.format,
        seed=args.seed,
    )
    values.update(overrides)
    return SessionConfig(**values)


def cmd_eval(args) -> int:
    config = _config(args)
    f = evaluate(args.expr, config.context())
    _emit(config, format_poly(f), {"ring": str(f.ring), "element": to_json(f)})
    return EXIT_OK


def cmd_frobenius(args) -> int:
    config = _config(args)
    ctx = config.context()
    f = frobenius(evaluate(args.expr, ctx), ctx)
    _emit(config, format_poly(f), {"ring": str(f.ring), "element": to_json(f)})
    return EXIT_OK


def _parse_vector(text: str, config: SessionConfig):
    from .witt import WittVector

    ctx = config.context()
    comps = tuple(evaluate(part, ctx) for part in text.split(","))
    return WittVector(config.prime, comps)


def _witt_payload(w) -> dict:
    return {"p": w.p, "components": [to_json(c) for c in w.components]}


def _witt_text(comps) -> str:
    return "(" + ", ".join(format_poly(c) for c in comps) + ")"


def cmd_witt(args) -> int:
    from .witt import witt_add, witt_mul

    config = _config(args)
    u, v = _parse_vector(args.u, config), _parse_vector(args.v, config)
    w = witt_add(u, v) if args.command == "witt-add" else witt_mul(u, v)
    _emit(config, _witt_text(w.components), _witt_payload(w))
    return EXIT_OK


def cmd_ghost(args) -> int:
    from .witt import ghost

    config = _config(args)
    g = ghost(_parse_vector(args.u, config))
    _emit(config, _witt_text(g), {"ghost": [to_json(c) for c in g]})
    return EXIT_OK


def parse_sequence(text: str, ctx: DeltaContext) -> list:
    """Comma-separated elements; a plain space-separated list of simple elements also works."""
    text = text.strip()
    if not text:
        return []
    if "," in text:
        return [evaluate(part, ctx) for part in text.split(",")]
    try:
        return [evaluate(text, ctx)]
    except ParseError:
        words = text.split()
        if len(words) < 2:
            raise
        try:
            nodes = [parse(w) for w in words]
        except ParseError:
            raise ParseError(f"cannot read sequence {text!r}", 0) from None
        return [evaluate(n, ctx) for n in nodes]


def _spec_dials(args, spec) -> tuple:
    depth = args.depth if args.depth is not None else (spec.depth or 3)
    degree = args.degree if args.degree is not None else (spec.degree or 8)
    precision = args.precision if args.precision is not None else (spec.precision or 2)
    return depth, degree, precision


def _read_spec(path: str):
    from .prism import parse_prism_spec

    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DeltaPrismError(f"cannot read spec file: {exc}") from None
    return parse_prism_spec(text)


def cmd_envelope(args) -> int:
    from .prism import envelope_regular

    spec = _read_spec(args.spec)
    if args.prime is not None and args.prime != spec.prime:
        raise DeltaPrismError(f"-p {args.prime} disagrees with the spec prime {spec.prime}")
    depth, degree, precision = _spec_dials(args, spec)
    prism = spec.prism(depth, degree, precision)
    seq = parse_sequence(args.seq, prism.A.ctx)
    unknown = set().union(*(x.symbols() for x in seq)) - set(prism.A.symbols) if seq else set()
    if unknown:
        raise DeltaPrismError(f"sequence uses unknown generators {sorted(unknown)}")
    env = envelope_regular(prism, seq)
    report = env.report()
    config = SessionConfig(spec.prime, precision, depth, degree, args.format, args.seed)
    if config.fmt == "json":
        _emit(config, "", report)
    else:
        lines = [
            f"p={spec.prime} N={precision} K={depth} D={degree}",
            "generators: " + " ".join(report["generators"]),
            "relations: " + "; ".join(format_poly(r) for r in env.relations),
            f"slice_dimension: {report['slice_dimension']}",
            f"slice_length: {report['slice_length']}",
            f"distinguished: {str(report['distinguished']).lower()}",
            f"torsion_unchecked: {str(report['torsion_unchecked']).lower()}",
        ]
        print("\n".join(lines))
    return EXIT_OK


def cmd_cech(args) -> int:
    from .cech import build_cech, cech_report

    spec = _read_spec(args.spec)
    depth, degree, precision = _spec_dials(args, spec)
    prism = spec.prism(depth, degree, precision)
    P = spec.polynomial_presentation(depth, degree, precision)
    ctx = DeltaContext(prism.A.ring, depth, {**prism.A.ctx.explicit, **P.ctx.explicit})
    seq = parse_sequence(args.seq, ctx)
    C = build_cech(prism, P, seq, L=args.levels)
    report = cech_report(C, hodge_weight=args.hodge_weight)
    config = SessionConfig(spec.prime, precision, depth, degree, args.format, args.seed)
    if config.fmt == "json":
        _emit(config, "", report)
    else:
        par = report["params"]
        lines = [f"p={par['p']} N={par['N']} K={par['K']} D={par['D']} L={par['L']}"]
        for lv in report["levels"]:
            lines.append(f"level {lv['level']}: {' '.join(lv['generators'])}  "
                         f"slice_dimension={lv['slice_dimension']}")
        lines.append(f"identities_ok: {str(report['identities_ok']).lower()}")
        lines.append(f"differential_squared_zero: {str(report['differential_squared_zero']).lower()}")
        lines.append(f"h0_matches_envelope: {str(report['h0_matches_envelope']).lower()}")
        for i, r in report["h_ranks"]:
            lines.append(f"H^{i}: rank {r}")
        for i, r, t in report["hodge_tate"]:
            lines.append(f"hodge-tate {i}: rank {r} twist {{{t}}}")
        print("\n".join(lines))
    return EXIT_OK


def cmd_suite(args) -> int:
    from .suites import run_suite

    config = _config(args)
    report = run_suite(args.name, config.prime, config.seed)
    header = f"suite {args.name} p={config.prime} seed={config.seed}"
    if config.fmt == "json":
        _emit(config, "", report.to_json())
    else:
        print("\n".join([header] + report.lines()))
    return EXIT_OK if report.passed else EXIT_SUITE


def _dials(parser: argparse.ArgumentParser, prime_default=2) -> None:
    parser.add_argument("-p", "--prime", type=int, default=prime_default)
    parser.add_argument("-N", "--precision", type=int, default=None,
                        help="work in Z/p^N (default: exact integers, or the spec file value)")
    parser.add_argument("-K", "--depth", type=int, default=None, help="δ-depth bound (default 3)")
    parser.add_argument("-D", "--degree", type=int, default=None, help="δ-degree bound (default 8)")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deltaprism", description="δ-rings, Witt vectors and prismatic envelopes")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (("eval", cmd_eval, "evaluate an expression, applying D(...) as δ"),
                            ("frobenius", cmd_frobenius, "apply the Frobenius lift φ = f^p + p·δ(f)")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("expr")
        _dials(sp)
        sp.set_defaults(func=fn)

    for name in ("witt-add", "witt-mul"):
        sp = sub.add_parser(name, help="Witt vector arithmetic; components separated by commas")
        sp.add_argument("u")
        sp.add_argument("v")
        _dials(sp)
        sp.set_defaults(func=cmd_witt)

    sp = sub.add_parser("ghost", help="ghost components of a Witt vector")
    sp.add_argument("u")
    _dials(sp)
    sp.set_defaults(func=cmd_ghost)

    sp = sub.add_parser("envelope", help="envelope of a regular sequence over a prism spec file")
    sp.add_argument("spec")
    sp.add_argument("seq", nargs="?", default="")
    _dials(sp, prime_default=None)
    sp.set_defaults(func=cmd_envelope)

    sp = sub.add_parser("cech", help="truncated Čech–Alexander complex over a prism spec file")
    sp.add_argument("spec")
    sp.add_argument("seq", nargs="?", default="")
    sp.add_argument("-L", "--levels", type=int, default=1, choices=(0, 1, 2))
    sp.add_argument("--hodge-weight", type=int, default=None)
    _dials(sp, prime_default=None)
    sp.set_defaults(func=cmd_cech)

    sp = sub.add_parser("suite", help="run invariant suites")
    sp.add_argument("name", choices=("delta", "witt", "envelope", "cech", "all"))
    _dials(sp)
    sp.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DeltaPrismError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
