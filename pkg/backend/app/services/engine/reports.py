"""
Verdict rendering: versioned JSON and a plain-text summary.
"""

import orjson

from .pipeline import Verdict

TEXT_RULE = "-" * 60


def verdict_to_json(verdict: Verdict) -> bytes:
    """Deterministic JSON bytes (sorted keys) of a verdict."""
    return orjson.dumps(verdict.model_dump(mode="json"), option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2)


def render_text(verdict: Verdict) -> str:
    lines = [
        f"verdict: {verdict.outcome}",
        f"encoding: {verdict.encoding}",
        f"schema: {verdict.schema_version}",
        TEXT_RULE,
    ]
    for record in verdict.per_candidate:
        stages = f"lamalg1 stages={record.lamalg1_stages} lamalg2 stages={record.lamalg2_stages}"
        lines.append(f"{record.candidate_id} [{record.selection}] {record.status} ({stages})")
        if record.exhausted_at is not None:
            lines.append(f"    exhausted at N={record.exhausted_at}")
        for item in record.evidence:
            lines.append(f"    {item}")
        for condition in record.report:
            if condition.status != "PASS":
                lines.append(f"    {condition.condition}: {condition.status}")
    lines.append(TEXT_RULE)
    lines.append(
        f"normal tori: {verdict.normal_tori}, exceptional vertex spheres: {verdict.exceptional_spheres}"
    )
    for caveat in verdict.caveats:
        lines.append(f"caveat: {caveat}")
    if verdict.certificate is not None:
        lines.append(f"certificate: selection {verdict.certificate.selection}")
    return "\n".join(lines) + "\n"
