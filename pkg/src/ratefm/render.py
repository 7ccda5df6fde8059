"""Human-readable and LaTeX views of systems, certificates and traces.

Entropy functionals print as signed combinations of H(...) coordinates;
cone facts print in their structured shapes (conditional mutual
informations, tail monotonicity, hypothesis and independence families).
Trace rendering classifies every derived inequality as green (member of
the final projected system), red (pruned, with its certificate) or black
(carried into a later elimination step).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Tuple

from .elimination import Trace
from .entropy import EntropyFunctional, GroundSet, ShannonContext, submasks
from .prover import Certificate
from .regions import InequalitySystem, RateInequality, var_key


def _coeff_prefix(c: Fraction, first: bool) -> str:
    sign = "-" if c < 0 else ("" if first else "+")
    mag = abs(c)
    body = "" if mag == 1 else f"{mag}*"
    if first:
        return f"{sign}{body}"
    return f" {sign or '+'} {body}" if not first else f"{sign}{body}"


def format_functional(f: EntropyFunctional, gs: GroundSet) -> str:
    if f.is_zero:
        return "0"
    parts: List[str] = []
    for mask, c in f.items():
        term = f"H({gs.subset_key(mask)})"
        if not parts:
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(("-" if c < 0 else "") + mag + term)
        else:
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(("- " if c < 0 else "+ ") + mag + term)
    return " ".join(parts)


def format_inequality(q: RateInequality, gs: GroundSet) -> str:
    terms: List[str] = []
    for v, c in sorted(q.lhs.items(), key=lambda t: var_key(t[0])):
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        if not terms:
            terms.append(("-" if c < 0 else "") + mag + v.name)
        else:
            terms.append(("- " if c < 0 else "+ ") + mag + v.name)
    lhs = " ".join(terms) if terms else "0"
    return f"{lhs} <= {format_functional(q.rhs, gs)}"


def elemental_descriptions(gs: GroundSet) -> Tuple[str, ...]:
    """Structured names matching the order of elemental_inequalities(gs)."""
    out: List[str] = []
    for i in range(gs.n):
        out.append(f"H({gs.subset_key(gs.full)}) - H({gs.subset_key(gs.full ^ (1 << i))})")
    for i in range(gs.n):
        for j in range(i + 1, gs.n):
            rest = gs.full & ~((1 << i) | (1 << j))
            for t in submasks(rest):
                pair = f"{gs.names[i]};{gs.names[j]}"
                cond = f"|{gs.subset_key(t)}" if t else ""
                out.append(f"I({pair}{cond})")
    return tuple(out)


def hypothesis_descriptions(gs: GroundSet) -> Tuple[str, ...]:
    from .entropy import user_subsets

    out: List[str] = []
    for s in user_subsets(gs.k):
        xs = ",".join(f"X{u}" for u in s)
        sbar = gs.complement_users(s)
        cond = "|" + ",".join(f"X{u}" for u in sbar) if sbar else ""
        out.append(f"I({xs};Y{cond}) - I({xs};Z)")
    return tuple(out)


def independence_descriptions(gs: GroundSet) -> Tuple[str, ...]:
    from .entropy import user_subsets

    out: List[str] = []
    for s in user_subsets(gs.k, min_size=2):
        names = ",".join(f"X{u}" for u in s)
        tail = " - ".join(f"H(X{u})" for u in s)
        out.append(f"H({names}) - {tail}")
    return tuple(out)


def format_certificate(cert: Certificate, ctx: ShannonContext) -> str:
    """One-line derivation: sources with weights, then the cone slack terms."""
    gs = ctx.ground
    parts: List[str] = []
    if cert.combo:
        srcs = " + ".join(
            (f"{w}*{label}" if w != 1 else label) for label, w in sorted(cert.combo.items())
        )
        parts.append(f"via {{{srcs}}}")
    slack_bits: List[str] = []
    elem_names = elemental_descriptions(gs)
    for idx, w in sorted(cert.elemental_weights.items()):
        coeff = "" if w == 1 else f"{w}*"
        slack_bits.append(f"{coeff}[{elem_names[idx]}]")
    hyp_names = hypothesis_descriptions(gs)
    for idx, w in sorted(cert.hypothesis_weights.items()):
        coeff = "" if w == 1 else f"{w}*"
        slack_bits.append(f"{coeff}[{hyp_names[idx]}]")
    ind_names = independence_descriptions(gs)
    for idx, w in sorted(cert.independence_weights.items()):
        slack_bits.append(f"{w}*[{ind_names[idx]} = 0]")
    if slack_bits:
        parts.append("+ slack " + " + ".join(slack_bits))
    return " ".join(parts) if parts else "trivial"


def _classify(trace: Trace) -> Dict[str, str]:
    """Label -> green/red/black for every pairing result in the trace."""
    pruned = {e.label for e in trace.prune_events}
    final_keys = trace.final.key_set()
    classes: Dict[str, str] = {}
    for step in trace.steps:
        for p in step.pairings:
            label = p.result.label
            if label in pruned:
                classes[label] = "red"
            elif p.result.key() in final_keys:
                classes[label] = "green"
            else:
                classes[label] = "black"
    return classes


def render_trace(trace: Trace, fmt: str, ctx: ShannonContext = None) -> str:
    """Deterministic document for a trace; formats: text, latex, json."""
    if fmt == "json":
        import json

        from .elimination import trace_to_json

        return json.dumps(trace_to_json(trace), indent=2, sort_keys=True) + "\n"
    if fmt == "text":
        return _render_text(trace, ctx)
    if fmt == "latex":
        return _render_latex(trace)
    raise ValueError(f"unknown render format {fmt!r}")


def _render_text(trace: Trace, ctx: ShannonContext = None) -> str:
    gs = trace.final.ground
    if ctx is None:
        from .entropy import shannon_context

        ctx = shannon_context(gs)
    classes = _classify(trace)
    cert_by_label = {e.label: (e.step, e.certificate) for e in trace.prune_events}
    lines: List[str] = [
        f"elimination trace: k={trace.k}, order {', '.join(v.name for v in trace.order)}",
        "",
    ]
    for no, step in enumerate(trace.steps, start=1):
        lines.append(
            f"step {no}: eliminate {step.variable.name} "
            f"({len(step.uppers)} uppers x {len(step.lowers)} lowers "
            f"-> {len(step.pairings)} pairings, {len(step.neutrals)} carried)"
        )
        for letter, src in step.uppers:
            lines.append(f"  upper {letter} <- {src}")
        for number, src in step.lowers:
            lines.append(f"  lower {number} <- {src}")
        for p in step.pairings:
            label = p.result.label
            status = classes.get(label, "black").upper()
            lines.append(f"  {label}: {status:5s} {format_inequality(p.result, gs)}")
            if label in cert_by_label:
                _, cert = cert_by_label[label]
                lines.append(f"      REDUNDANT {format_certificate(cert, ctx)}")
        for label, twin in step.duplicates:
            lines.append(f"  {label}: duplicate of {twin}, dropped")
        lines.append("")
    lines.append(f"final system ({len(trace.final)} inequalities):")
    for q in trace.final:
        lines.append(f"  {q.label}: {format_inequality(q, gs)}")
    return "\n".join(lines) + "\n"


def _tex_var(name: str) -> str:
    # R1s -> R_1^{s};  X1 -> X_1
    if name.startswith("R"):
        return f"R_{{{name[1:-1]}}}^\\mathrm{{{name[-1]}}}"
    if name in ("Y", "Z"):
        return name
    return f"X_{{{name[1:]}}}"


def _tex_functional(f: EntropyFunctional, gs: GroundSet) -> str:
    if f.is_zero:
        return "0"
    parts: List[str] = []
    for mask, c in f.items():
        arg = " ".join(_tex_var(n) for n in gs.names_of(mask))
        mag = "" if abs(c) == 1 else f"\\tfrac{{{abs(c.numerator)}}}{{{c.denominator}}}" if c.denominator != 1 else f"{abs(c)}"
        term = f"{mag}H({arg})"
        if not parts:
            parts.append(("-" if c < 0 else "") + term)
        else:
            parts.append(("- " if c < 0 else "+ ") + term)
    return " ".join(parts)


def _tex_inequality(q: RateInequality, gs: GroundSet) -> str:
    parts: List[str] = []
    for v, c in sorted(q.lhs.items(), key=lambda t: var_key(t[0])):
        mag = "" if abs(c) == 1 else f"{abs(c)}"
        term = f"{mag}{_tex_var(v.name)}"
        if not parts:
            parts.append(("-" if c < 0 else "") + term)
        else:
            parts.append(("- " if c < 0 else "+ ") + term)
    lhs = " ".join(parts) if parts else "0"
    return f"{lhs} \\le {_tex_functional(q.rhs, gs)}"


def _render_latex(trace: Trace) -> str:
    gs = trace.final.ground
    classes = _classify(trace)
    color = {"green": "ForestGreen", "red": "red", "black": "black"}
    out: List[str] = [
        "\\documentclass{article}",
        "\\usepackage{amsmath}",
        "\\usepackage[dvipsnames]{xcolor}",
        "\\begin{document}",
        f"\\section*{{Elimination trace (k={trace.k})}}",
    ]
    for no, step in enumerate(trace.steps, start=1):
        out.append(
            f"\\subsection*{{Step {no}: eliminate ${_tex_var(step.variable.name)}$}}"
        )
        out.append("\\begin{align*}")
        rows = []
        for p in step.pairings:
            label = p.result.label
            col = color[classes.get(label, "black")]
            rows.append(
                f"&\\textcolor{{{col}}}{{\\text{{{label}}}.\\quad "
                f"{_tex_inequality(p.result, gs)}}}"
            )
        out.append(" \\\\\n".join(rows) if rows else "&\\text{(no pairings)}")
        out.append("\\end{align*}")
    out.append(f"\\subsection*{{Projected system ({len(trace.final)} inequalities)}}")
    out.append("\\begin{align*}")
    out.append(
        " \\\\\n".join(
            f"&\\textcolor{{ForestGreen}}{{\\text{{{q.label}}}.\\quad {_tex_inequality(q, gs)}}}"
            for q in trace.final
        )
    )
    out.append("\\end{align*}")
    out.append("\\end{document}")
    return "\n".join(out) + "\n"
