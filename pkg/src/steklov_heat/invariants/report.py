"""Machine-readable derivation report for the exact heat invariants."""

from __future__ import annotations

from typing import Dict, List

from .curvature import ExactScalar, monomial_name
from .expected import expected_invariant, regroup_a2
from .extract import derive_invariant, raw_jet_invariant


def _scalar_json(s: ExactScalar) -> dict:
    return {"rational": str(s.rational), "pi_power": s.pi_power, "value": float(s)}


def derivation_entry(n: int, k: int, timings: bool = True) -> dict:
    der = derive_invariant(n, k)
    poly = der.polynomial
    expected = expected_invariant(n, k)
    entry = {
        "k": k,
        "match": poly == expected,
        "zero": poly.is_zero(),
        "prefactor": _scalar_json(poly.prefactor),
        "terms": [{"monomial": monomial_name(m), "coeff": str(c)} for m, c in poly.items()],
        "unmatched": [
            {"monomial": monomial_name(m), "difference": str(c)} for m, c in (poly - expected).items()
        ],
        "stage_counts": der.stage_counts,
    }
    if k == 2:
        entry["regrouped"] = {
            name: {"bracket": str(c), "coefficient": _scalar_json(poly.prefactor * c)}
            for name, c in regroup_a2(poly).items()
        }
    if timings:
        entry["wall_seconds"] = round(der.seconds, 6)
    return entry


def derivation_report(n: int, depth: int, timings: bool = True) -> dict:
    """Identity-gate report for a_0..a_depth in dimension n."""
    entries: List[dict] = [derivation_entry(n, k, timings) for k in range(depth + 1)]
    return {"dim": n, "depth": depth, "invariants": entries, "all_match": all(e["match"] for e in entries)}


def raw_k3_report(n: int) -> Dict[str, object]:
    raw = raw_jet_invariant(n, 3)
    return {
        "experimental": True,
        "dim": n,
        "k": 3,
        "terms": [
            {"jets": [j.label() for j in key], "coeff": str(c)} for key, c in raw.items()
        ],
    }
