"""JSON verdicts and DOT Hasse diagrams."""

from __future__ import annotations

import json
from typing import Optional

from . import finpos as fp
from . import worlds as w
from .engine import CompactAlgebra, Refuted, Stabilized, Verdict
from .finpos import FinPoset
from .worlds import Pair


def _report(r) -> Optional[dict]:
    return None if r is None else r.to_json()


def _algebra(a: Optional[CompactAlgebra]) -> Optional[dict]:
    if a is None:
        return None
    return {
        "carrier": w.to_json(a.world, a.carrier),
        "carrier_size": w.size(a.world, a.carrier),
        "stage": a.stage,
        "chain": a.source,
    }


def verdict_to_json(v: Verdict) -> dict:
    source = v.d_side if v.d_side is not None else v
    out = {
        "expression": v.expression,
        "world": v.world.value,
        "verdict": v.kind,
        "chain_sizes": v.chain_sizes(),
        "terminal_chain_sizes": source.terminal.sizes(),
        "truncated": source.initial.truncated or source.terminal.truncated,
        "ep_certified": source.ep_certified,
        "initiality": None,
        "finality": None,
    }
    if isinstance(v, Stabilized):
        a = v.algebra
        out["stage"] = a.stage
        out["carrier"] = w.to_json(a.world, a.carrier)
        out["initiality"] = _report(a.initiality)
        out["finality"] = _report(a.finality)
    elif isinstance(v, Refuted):
        out["initial_algebra"] = _algebra(v.initial_algebra)
        out["final_coalgebra"] = _algebra(v.final_coalgebra)
        if v.initial_algebra is not None:
            out["stage"] = v.initial_algebra.stage
            out["initiality"] = _report(v.initial_algebra.initiality)
            out["finality"] = _report(v.initial_algebra.finality)
        elif v.final_coalgebra is not None:
            out["initiality"] = _report(v.final_coalgebra.initiality)
        out["witness"] = None if v.witness is None else v.witness.to_json()
    if v.d_side is not None:
        d = {"world": v.d_side.world.value, "verdict": v.d_side.kind}
        if isinstance(v.d_side, Stabilized):
            d["stage"] = v.d_side.algebra.stage
            d["carrier"] = w.to_json(v.d_side.world, v.d_side.algebra.carrier)
            d["initiality"] = _report(v.d_side.algebra.initiality)
            d["finality"] = _report(v.d_side.algebra.finality)
        out["d_side"] = d
    if v.plain_initial is not None:
        out["plain_chain_sizes"] = v.plain_initial.sizes()
    if v.cross_check is not None:
        out["coherence"] = {"stages_checked": v.cross_check.stages_checked,
                            "mismatches": v.cross_check.mismatches}
    return out


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def poset_to_dot(p: FinPoset, name: str = "P") -> str:
    """Hasse diagram, edges pointing upwards."""
    labels = fp.unique_labels(p)
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;"]
    for i, lab in enumerate(labels):
        attrs = f"label={_quote(lab)}"
        if p.bottom == i:
            attrs += ", shape=box"
        lines.append(f"  n{i} [{attrs}];")
    for a, b in fp.cover_pairs(p):
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def object_to_dot(x, name: str = "P") -> str:
    """One graph per poset; pairs become two clusters."""
    if not isinstance(x, Pair):
        return poset_to_dot(x, name)
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;"]
    for tag, p in (("neg", x.neg), ("pos", x.pos)):
        lines.append(f"  subgraph cluster_{tag} {{")
        lines.append(f"    label={_quote(tag)};")
        for i, lab in enumerate(fp.unique_labels(p)):
            lines.append(f"    {tag}{i} [label={_quote(lab)}];")
        for a, b in fp.cover_pairs(p):
            lines.append(f"    {tag}{a} -> {tag}{b};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
