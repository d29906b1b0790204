# reporting/chart.py

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from domain.schemas import AttackerClass  # noqa: E402
from processing.sai import SaiEntry  # noqa: E402

COLORS = {
    AttackerClass.INSIDER: "#c0392b",
    AttackerClass.OUTSIDER: "#2c7fb8",
}

# fixed ids and no timestamp, so the same SAI renders to the same bytes
SVG_RC = {
    "svg.hashsalt": "psp-sai-chart",
    "svg.fonttype": "none",
}


def _label(entry: SaiEntry, granularity: str) -> str:
    if granularity == "keyword":
        return f"{entry.scenario}\n#{' #'.join(entry.keyword_tags)}"
    return entry.scenario


def render_sai_chart(sai: list[SaiEntry], granularity: str = "scenario") -> str:
    """
    Bar chart of SAI scores, scenarios on the x-axis in descending score
    order, coloured by attacker class. Returns the SVG document.
    """
    with plt.rc_context(SVG_RC):
        fig, ax = plt.subplots(figsize=(max(4.0, 1.2 * len(sai) + 2), 4.5))
        if sai:
            labels = [_label(e, granularity) for e in sai]
            ax.bar(
                range(len(sai)),
                [e.raw_score for e in sai],
                color=[COLORS[e.attacker_class] for e in sai],
            )
            ax.set_xticks(range(len(sai)))
            ax.set_xticklabels(labels, rotation=30, ha="right")
        else:
            ax.text(0.5, 0.5, "no matched posts", ha="center", va="center",
                    transform=ax.transAxes)
            ax.set_xticks([])

        handles = [plt.Rectangle((0, 0), 1, 1, color=c) for c in COLORS.values()]
        ax.legend(handles, [c.value for c in COLORS], loc="upper right")
        ax.set_ylabel("SAI score")
        ax.set_title("Social Attraction Index")
        fig.tight_layout()

        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buffer.getvalue()
