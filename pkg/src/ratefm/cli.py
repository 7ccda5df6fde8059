"""Batch command-line front end.

Commands: build, project, certify, verify-theorem, render, oracle-check.
Outputs are byte-deterministic for identical configs and seeds.  Exit
codes: 0 success/verified, 1 verification mismatch, 2 usage error,
3 internal LP failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from .elimination import (
    Trace,
    eliminate_all,
    mutually_implied,
    trace_from_json,
    trace_to_json,
)
from .entropy import shannon_context
from .lp import LpError
from .oracle import TOL, check_implication, entropy_vector, sample_model, sample_rate_points
from .prover import verify_nonneg, verify_redundancy
from .regions import (
    InequalitySystem,
    RateVar,
    build_master_region,
    build_target_region,
    parse_rate_var,
    system_equal,
)
from .render import format_inequality, render_trace

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


@dataclasses.dataclass
class RunConfig:
    command: str
    k: int = 3
    order: Optional[Tuple[RateVar, ...]] = None
    prune: bool = True
    seed: int = 0
    in_path: Optional[str] = None
    out_path: Optional[str] = None
    format: str = "text"
    region: str = "both"
    models: int = 100
    trials: int = 4


class UsageError(ValueError):
    pass


def _dump_json(data, path: Optional[str]) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_order(text: str, k: int) -> Tuple[RateVar, ...]:
    order = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if chunk.startswith("g"):  # accept both "g1" and "R1g"
            chunk = f"R{chunk[1:]}g"
        v = parse_rate_var(chunk)
        if v.kind != "g" or not 1 <= v.index <= k:
            raise UsageError(f"not an eliminable garbage rate for k={k}: {chunk}")
        order.append(v)
    if len(set(order)) != len(order):
        raise UsageError("elimination order repeats a variable")
    return tuple(order)


def _cmd_build(cfg: RunConfig) -> int:
    if cfg.region == "master":
        payload = build_master_region(cfg.k).to_json()
    elif cfg.region == "target":
        payload = build_target_region(cfg.k).to_json()
    else:
        payload = {
            "master": build_master_region(cfg.k).to_json(),
            "target": build_target_region(cfg.k).to_json(),
        }
    _dump_json(payload, cfg.out_path)
    return EXIT_OK


def _run_projection(cfg: RunConfig):
    master = build_master_region(cfg.k)
    ctx = shannon_context(master.ground)
    final, trace = eliminate_all(
        master, variables=cfg.order, prune_steps=cfg.prune, ctx=ctx
    )
    return master, ctx, final, trace


def _cmd_project(cfg: RunConfig) -> int:
    _, _, final, trace = _run_projection(cfg)
    _dump_json({"final": final.to_json(), "trace": trace_to_json(trace)}, cfg.out_path)
    return EXIT_OK


def _cmd_certify(cfg: RunConfig) -> int:
    _, ctx, _, trace = _run_projection(cfg)
    payload = {
        "k": cfg.k,
        "certificates": [
            {"step": e.step, "label": e.label, "certificate": e.certificate.to_json()}
            for e in trace.prune_events
        ],
    }
    _dump_json(payload, cfg.out_path)
    return EXIT_OK


def _cmd_verify(cfg: RunConfig) -> int:
    _, ctx, final, _ = _run_projection(cfg)
    target = build_target_region(cfg.k)
    if system_equal(final, target):
        print(f"{len(final)} inequalities, matches target")
        return EXIT_OK
    if mutually_implied(final, target, ctx):
        print(
            f"{len(final)} inequalities; differs from target as a set but the two "
            "systems imply each other over the admissible cone"
        )
        return EXIT_OK
    gs = final.ground
    target_keys = target.key_set()
    final_keys = final.key_set()
    print("projection does not match target:", file=sys.stderr)
    for q in final:
        if q.key() not in target_keys:
            print(f"  only in projection: {q.label}: {format_inequality(q, gs)}", file=sys.stderr)
    for q in target:
        if q.key() not in final_keys:
            print(f"  only in target:     {q.label}: {format_inequality(q, gs)}", file=sys.stderr)
    return EXIT_MISMATCH


def _cmd_render(cfg: RunConfig) -> int:
    if not cfg.in_path:
        raise UsageError("render needs --in pointing at a trace JSON file")
    with open(cfg.in_path) as fh:
        data = json.load(fh)
    if "trace" in data:
        data = data["trace"]
    trace = trace_from_json(data)
    doc = render_trace(trace, cfg.format)
    if cfg.out_path:
        with open(cfg.out_path, "w") as fh:
            fh.write(doc)
    else:
        sys.stdout.write(doc)
    return EXIT_OK


def _cmd_oracle_check(cfg: RunConfig) -> int:
    """Numeric cross-validation: cone facts and the projected system hold on
    sampled models; a deliberately falsified bound is caught."""
    master = build_master_region(cfg.k)
    ctx = shannon_context(master.ground)
    final, _ = eliminate_all(master, prune_steps=True, ctx=ctx)
    failures: List[str] = []
    canary_hits = 0
    for i in range(cfg.models):
        seed = cfg.seed + i
        model = sample_model(cfg.k, seed)
        ev = entropy_vector(model)
        for family, name, zero_ok in (
            (ctx.elemental, "elemental", False),
            (ctx.hypothesis, "hypothesis", False),
            (ctx.independence, "independence", True),
        ):
            for idx, f in enumerate(family):
                val = f.evaluate(ev.values)
                bad = abs(val) > TOL if zero_ok else val < -TOL
                if bad:
                    failures.append(f"seed {seed}: {name}[{idx}] = {val}")
        points = sample_rate_points(master, ev, trials=cfg.trials, seed=seed)
        for q in final:
            bound = float(q.rhs.evaluate(ev.values))
            for point in points:
                value = float(
                    sum(c * point.get(v, 0) for v, c in q.lhs.items())
                )
                if value - bound > TOL:
                    failures.append(f"seed {seed}: projected {q.label} violated")
        # one-bit-tightened single-user sum bound: its original form is tight
        # at every entropy vector, so the falsified version must be caught
        if not check_implication(
            master, _canary(cfg.k), model, trials=1, seed=seed, slack=-1.0
        ):
            canary_hits += 1
    if canary_hits < cfg.models:
        failures.append("falsified-inequality canary escaped detection on some model")
    summary = {
        "k": cfg.k,
        "models": cfg.models,
        "seed": cfg.seed,
        "failures": failures,
        "canary_detections": canary_hits,
    }
    _dump_json(summary, cfg.out_path)
    return EXIT_OK if not failures else EXIT_MISMATCH


def _canary(k: int):
    from fractions import Fraction

    from .entropy import GroundSet, mutual_information
    from .regions import RateInequality

    gs = GroundSet(k)
    lhs = {RateVar(1, "s"): Fraction(1), RateVar(1, "o"): Fraction(1)}
    rhs = mutual_information(gs.x_mask([1]), gs.y, gs.x_mask(range(2, k + 1)))
    return RateInequality(lhs, rhs, "canary")


def run(cfg: RunConfig) -> int:
    handlers = {
        "build": _cmd_build,
        "project": _cmd_project,
        "certify": _cmd_certify,
        "verify-theorem": _cmd_verify,
        "render": _cmd_render,
        "oracle-check": _cmd_oracle_check,
    }
    if cfg.command not in handlers:
        raise UsageError(f"unknown command {cfg.command!r}")
    if cfg.k < 1:
        raise UsageError("k must be >= 1")
    return handlers[cfg.command](cfg)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # emit machine-readable errors, exit 2
        _emit_error(EXIT_USAGE, "usage", message)
        raise SystemExit(EXIT_USAGE)


def _emit_error(code: int, kind: str, message: str) -> None:
    sys.stderr.write(
        json.dumps({"error": {"code": code, "kind": kind, "message": message}}) + "\n"
    )


def _build_parser() -> _Parser:
    parser = _Parser(prog="ratefm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_order=True):
        p.add_argument("--k", type=int, default=3)
        if with_order:
            p.add_argument("--order", type=str, default=None, help="e.g. g1,g2,g3")
            p.add_argument(
                "--prune", action=argparse.BooleanOptionalAction, default=True
            )
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", dest="out_path", type=str, default=None)

    p = sub.add_parser("build", help="write region systems as JSON")
    common(p, with_order=False)
    p.add_argument("--region", choices=["master", "target", "both"], default="both")

    p = sub.add_parser("project", help="eliminate garbage rates, write final+trace")
    common(p)

    p = sub.add_parser("certify", help="write certificates for pruned inequalities")
    common(p)

    p = sub.add_parser("verify-theorem", help="check projection equals target")
    common(p)

    p = sub.add_parser("render", help="render a trace JSON file")
    p.add_argument("--in", dest="in_path", type=str, required=True)
    p.add_argument("--format", choices=["text", "latex", "json"], default="text")
    p.add_argument("--out", dest="out_path", type=str, default=None)

    p = sub.add_parser("oracle-check", help="numeric cross-validation run")
    common(p, with_order=False)
    p.add_argument("--models", type=int, default=100)
    p.add_argument("--trials", type=int, default=4)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(
        command=ns.command,
        k=getattr(ns, "k", 3),
        prune=getattr(ns, "prune", True),
        seed=getattr(ns, "seed", 0),
        in_path=getattr(ns, "in_path", None),
        out_path=getattr(ns, "out_path", None),
        format=getattr(ns, "format", "text"),
        region=getattr(ns, "region", "both"),
        models=getattr(ns, "models", 100),
        trials=getattr(ns, "trials", 4),
    )
    try:
        if getattr(ns, "order", None):
            cfg.order = _parse_order(ns.order, cfg.k)
        return run(cfg)
    except UsageError as exc:
        _emit_error(EXIT_USAGE, "usage", str(exc))
        return EXIT_USAGE
    except LpError as exc:
        _emit_error(EXIT_INTERNAL, "lp", str(exc))
        return EXIT_INTERNAL
    except (OSError, ValueError, KeyError) as exc:
        _emit_error(EXIT_USAGE, "input", f"{type(exc).__name__}: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
