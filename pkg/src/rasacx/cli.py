"""Command-line front end.

    rasacx verify {rasa,split,general,chains,hlp} [options]
    rasacx check cx A.json B.json
    rasacx majorize P.json Q.json
    rasacx sigma P.json Q.json
    rasacx pinch P.json Q.json
    rasacx examples

Exit status is 0 when every checked inequality or relation holds, 1 when
one fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from rasacx import golden
from rasacx.convex_order import cx_falsify_random, is_cx_dominated
from rasacx.distributions import DiscreteDistribution
from rasacx.errors import DomainError, OrderError, ParseError, RangeError
from rasacx.functions import ConvexTestFunction
from rasacx.majorization import ProbVector, bernoulli_convolution, majorizes, pinch_chain, sigma_criterion
from rasacx.numerics import elementary_symmetric_all, format_rational, parse_rational
from rasacx import sweeps

log = logging.getLogger("rasacx")

VERIFY_TARGETS = ("rasa", "split", "general", "chains", "hlp")
DEFAULT_N = {"rasa": "1..5", "split": "1..5", "general": "1..3", "chains": "1..3", "hlp": "1..5"}
DEFAULT_K = {"general": "2..3", "chains": "3"}


@dataclass
class RunConfig:
    command: str
    target: Optional[str] = None
    n_range: Tuple[int, ...] = ()
    grid_denominator: int = 8
    k: Tuple[int, ...] = ()
    ns: Optional[List[Tuple[int, ...]]] = None
    xs: Optional[List[Tuple[Fraction, ...]]] = None
    f: str = sweeps.BATTERY
    seed: int = 0
    trials: int = 2000
    pairs: int = 50
    workers: int = 1
    files: List[str] = field(default_factory=list)
    output_path: Optional[str] = None
    format: str = "json"

    def __post_init__(self) -> None:
        if self.grid_denominator < 1:
            raise DomainError("--grid-denominator must be >= 1")
        if self.trials < 1:
            raise DomainError("--trials must be >= 1")

    def report_config(self) -> Dict[str, Any]:
        """Everything that determines report content (not workers or output location)."""
        return {
            "n": list(self.n_range),
            "grid_denominator": self.grid_denominator,
            "k": list(self.k),
            "ns": None if self.ns is None else [list(ns) for ns in self.ns],
            "xs": None if self.xs is None else [[format_rational(x) for x in xs] for xs in self.xs],
            "f": self.f,
            "seed": self.seed,
            "pairs": self.pairs if self.target == "hlp" else None,
        }


# -- argument parsing ------------------------------------------------------------


def parse_int_range(text: str) -> Tuple[int, ...]:
    """``"1..3"`` -> (1, 2, 3); ``"2"`` -> (2,); ``"1,4"`` -> (1, 4)."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            values = tuple(range(int(lo), int(hi) + 1))
        else:
            values = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ParseError(f"bad integer range {text!r}") from exc
    if not values:
        raise ParseError(f"empty integer range {text!r}")
    return values


def parse_rational_list(text: str) -> Tuple[Fraction, ...]:
    return tuple(parse_rational(v.strip()) for v in text.split(","))


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc


def _with_path(path: str, loader, obj: Any):
    try:
        return loader(obj)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except DomainError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def load_distribution(path: str) -> DiscreteDistribution:
    return _with_path(path, DiscreteDistribution.from_json_obj, load_json(path))


def load_vector(path: str) -> ProbVector:
    return _with_path(path, ProbVector.from_json_obj, load_json(path))


def parse_function(spec: str) -> sweeps.FunctionChoice:
    """``battery``, ``hinge:t``, ``abs:t``, ``square`` or ``file:path`` (also a bare ``*.json`` path)."""
    if spec == sweeps.BATTERY:
        return spec
    if spec == "square":
        return ConvexTestFunction.square()
    kind, _, arg = spec.partition(":")
    if kind == "hinge" and arg:
        return ConvexTestFunction.hinge(parse_rational(arg))
    if kind == "abs" and arg:
        return ConvexTestFunction.absolute(parse_rational(arg))
    if kind == "file" and arg:
        return _with_path(arg, ConvexTestFunction.from_json_obj, load_json(arg))
    if spec.endswith(".json"):
        return _with_path(spec, ConvexTestFunction.from_json_obj, load_json(spec))
    raise ParseError(f"unknown --f value {spec!r} (expected battery, hinge:t, abs:t, square or file:path)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rasacx", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="sweep an inequality family over a rational grid")
    verify.add_argument("target", choices=VERIFY_TARGETS)
    verify.add_argument("--n", help="degree range, e.g. 1..5 (block sizes for general/chains)")
    verify.add_argument("--grid-denominator", type=int, default=8)
    verify.add_argument("--k", help="block counts for general/chains, e.g. 2..3")
    verify.add_argument("--ns", action="append", help="block sizes, e.g. 1,2,3 (repeatable)")
    verify.add_argument("--xs", action="append", help="block arguments, e.g. 0,1/2,1 (repeatable)")
    verify.add_argument("--f", default=sweeps.BATTERY, help="battery | hinge:t | abs:t | square | file:path")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--trials", type=int, default=2000)
    verify.add_argument("--pairs", type=int, default=50, help="random majorized pairs for hlp")
    verify.add_argument("--workers", type=int, default=1)
    verify.add_argument("--out")
    verify.add_argument("--format", choices=("json", "csv"), default="json")

    check = sub.add_parser("check", help="decide a relation between two distributions")
    check.add_argument("relation", choices=("cx",))
    check.add_argument("file_a")
    check.add_argument("file_b")
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--trials", type=int, default=2000)
    check.add_argument("--out")

    for name, text in (
        ("majorize", "does P majorize Q?"),
        ("sigma", "symmetric-polynomial criterion for the Bernoulli convolutions of P and Q"),
        ("pinch", "pinch chain from P down to Q"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("file_p")
        p.add_argument("file_q")
        p.add_argument("--out")

    ex = sub.add_parser("examples", help="replay the two worked examples with exact values")
    ex.add_argument("--format", choices=("text", "json"), default="text")
    ex.add_argument("--out")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.command != "verify":
        files = [getattr(args, a) for a in ("file_a", "file_b", "file_p", "file_q") if hasattr(args, a)]
        return RunConfig(
            command=args.command,
            target=getattr(args, "relation", None),
            seed=getattr(args, "seed", 0),
            trials=getattr(args, "trials", 2000),
            files=files,
            output_path=args.out,
            format=getattr(args, "format", "json"),
        )
    target = args.target
    ns = [tuple(parse_int_range(v)) for v in args.ns] if args.ns else None
    xs = [parse_rational_list(v) for v in args.xs] if args.xs else None
    k = parse_int_range(args.k if args.k else DEFAULT_K.get(target, "2"))
    return RunConfig(
        command="verify",
        target=target,
        n_range=parse_int_range(args.n or DEFAULT_N[target]),
        grid_denominator=args.grid_denominator,
        k=k if target in DEFAULT_K else (),
        ns=ns,
        xs=xs,
        f=args.f,
        seed=args.seed,
        trials=args.trials,
        pairs=args.pairs,
        workers=args.workers,
        output_path=args.out,
        format=args.format,
    )


# -- commands ----------------------------------------------------------------------


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _verify(config: RunConfig) -> int:
    choice = parse_function(config.f)
    target = config.target
    if target in ("rasa", "split"):
        tasks = sweeps.rasa_tasks(target, config.n_range, config.grid_denominator, choice, config.seed)
    elif target in ("general", "chains"):
        ks = [k for k in config.k if target != "chains" or k >= 2]
        ns_list = config.ns if config.ns is not None else sweeps.ns_product(ks, config.n_range)
        tasks = sweeps.block_tasks(target, ns_list, config.grid_denominator, choice, config.seed, config.xs)
    else:
        tasks = sweeps.hlp_tasks(config.n_range, config.pairs, choice, config.seed)
    report = sweeps.build_report(f"verify {target}", config.report_config(), tasks, config.workers)
    _emit(report.render(config.format), config.output_path)
    summary = report.summary()
    log.info("%s: %d records, %d failures", target, summary["total"], summary["failures"])
    return 0 if summary["failures"] == 0 else 1


def _check_cx(config: RunConfig) -> int:
    mu, nu = (load_distribution(p) for p in config.files)
    verdict = is_cx_dominated(mu, nu)
    found = cx_falsify_random(mu, nu, config.trials, config.seed)
    out = {
        "mu": mu.to_json_obj(),
        "nu": nu.to_json_obj(),
        "verdict": verdict.to_json_obj(),
        "oracle": {
            "trials": config.trials,
            "seed": config.seed,
            "violation": None if found is None else found.to_json_obj(),
        },
    }
    if verdict.dominated and found is not None:
        log.error("decision says dominated but the random oracle found a violating function")
    _emit(_dump(out), config.output_path)
    return 0 if verdict.dominated else 1


def _majorize(config: RunConfig) -> int:
    p, q = (load_vector(f) for f in config.files)
    pq = majorizes(p, q)
    out = {"p": p.to_json_obj(), "q": q.to_json_obj(), "p_majorizes_q": pq, "q_majorizes_p": majorizes(q, p)}
    _emit(_dump(out), config.output_path)
    return 0 if pq else 1


def _sigma(config: RunConfig) -> int:
    p, q = (load_vector(f) for f in config.files)
    crit = sigma_criterion(p, q)
    direct = is_cx_dominated(bernoulli_convolution(p), bernoulli_convolution(q))
    out = {
        "p": p.to_json_obj(),
        "q": q.to_json_obj(),
        "sigma_p": [format_rational(s) for s in elementary_symmetric_all(p.entries)],
        "sigma_q": [format_rational(s) for s in elementary_symmetric_all(q.entries)],
        "sigma_criterion": crit,
        "convex_order": direct.to_json_obj(),
        "agree": crit == direct.dominated,
    }
    if crit != direct.dominated:
        log.error("sigma criterion disagrees with the direct convex-order decision")
    _emit(_dump(out), config.output_path)
    return 0 if crit else 1


def _pinch(config: RunConfig) -> int:
    p, q = (load_vector(f) for f in config.files)
    steps = pinch_chain(p, q)
    out = {
        "start": [format_rational(v) for v in p.sorted_desc()],
        "target": [format_rational(v) for v in q.sorted_desc()],
        "steps": [s.to_json_obj() for s in steps],
    }
    _emit(_dump(out), config.output_path)
    return 0


def _examples(config: RunConfig) -> int:
    sections = [("first example", golden.first_example()), ("second example", golden.second_example())]
    ok = all(c.ok for _, checks in sections for c in checks)
    if config.format == "json":
        text = _dump({name: [c.to_json_obj() for c in checks] for name, checks in sections} | {"ok": ok})
    else:
        lines = []
        for name, checks in sections:
            lines.append(f"== {name}")
            for c in checks:
                mark = "ok  " if c.ok else "FAIL"
                actual = golden._show(c.actual)
                lines.append(f"  [{mark}] {c.label}: {actual}")
        lines.append("all values reproduced" if ok else "MISMATCH against published values")
        text = "\n".join(lines) + "\n"
    _emit(text, config.output_path)
    return 0 if ok else 1


COMMANDS = {
    "verify": _verify,
    "check": _check_cx,
    "majorize": _majorize,
    "sigma": _sigma,
    "pinch": _pinch,
    "examples": _examples,
}


def run(config: RunConfig) -> int:
    return COMMANDS[config.command](config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return run(config_from_args(args))
    except (ParseError, DomainError, RangeError, OrderError) as exc:
        print(f"rasacx: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
