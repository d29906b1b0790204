# reporting/summary.py
# Human-readable run summary, printed to stdout and saved as summary.txt.

from __future__ import annotations

from feasibility.ratings import AttackVector


def _rule(title: str) -> str:
    return f"\n---------- {title} ----------"


def render_summary(bundle) -> str:
    lines = [
        "PSP risk assessment",
        f"run id:       {bundle.run_id}",
        f"generated at: {bundle.generated_at}",
        f"window:       {bundle.window.label() if bundle.window else 'all posts'}",
        f"posts:        {bundle.post_count} loaded, {bundle.skipped} skipped, "
        f"{bundle.matched_count} matched",
    ]

    lines.append(_rule("Social Attraction Index"))
    if not bundle.sai:
        lines.append("no matched posts")
    for rank, e in enumerate(bundle.sai, start=1):
        lines.append(
            f"{rank:>2}. {e.scenario:<24} {e.raw_score:>10.3f}  p={e.probability:.3f}  "
            f"{e.attacker_class.value:<8} {e.dominant_vector.value:<8} "
            f"posts={e.post_count}  #{' #'.join(e.keyword_tags)}"
        )
    lines.append(f"insider:  {', '.join(sorted({e.scenario for e in bundle.insider})) or '-'}")
    lines.append(f"outsider: {', '.join(sorted({e.scenario for e in bundle.outsider})) or '-'}")

    lines.append(_rule("Attack-vector feasibility (base -> tuned)"))
    for t in bundle.tuned:
        cells = "  ".join(
            f"{v.value}={t.base[v].value}" + (f"->{t.tuned[v].value}" if t.tuned[v] != t.base[v] else "")
            for v in AttackVector
        )
        lines.append(f"{t.scenario:<24} [{t.mode}] {cells}")
        rating = bundle.ratings.get(t.scenario)
        if rating is not None:
            cal = f", {rating.cal.value}" if rating.cal else ""
            lines.append(f"{'':<24} rated {rating.vector_rating.value} via {t.factors.top_vector().value}{cal}")

    lines.append(_rule("Keyword auto-learning"))
    if not bundle.additions:
        lines.append("no new keywords")
    for k in bundle.additions:
        lines.append(f"#{k.tag} -> {k.scenario} ({k.attacker_class.value}, {k.vector.value}; parent #{k.parent_tag})")

    if bundle.financial or bundle.financial_omitted:
        lines.append(_rule("Financial feasibility"))
        for r in bundle.financial:
            verdict = "profitable" if r.profitable else "not profitable"
            lines += [
                f"{r.scenario}:",
                f"  PAE {r.pae} ({r.pae_basis}), PPIA {r.ppia} ({r.ppia_source})",
                f"  market value {r.market_value}",
                f"  fixed cost {r.fixed_cost}, break-even {r.break_even} units",
                f"  max adversary investment {r.max_adversary_investment}",
                f"  verdict: {verdict}, feasibility {r.feasibility.value}",
            ]
        for label in sorted(bundle.financial_omitted):
            lines.append(f"{label}: omitted (no price data)")

    return "\n".join(lines) + "\n"
