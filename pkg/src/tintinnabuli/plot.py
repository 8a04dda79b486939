"""Piano-roll style SVG plots: diatonic pitch against syllable index."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Literal, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .errors import ValidationError  # noqa: E402
from .pitchspace import LETTERS, Pitch  # noqa: E402
from .plan import VOICES  # noqa: E402
from .score import Score  # noqa: E402

COLORS = {"soprano": "#d62728", "alto": "#1f77b4", "tenor": "#ff7f0e", "bass": "#2ca02c"}
# E2 sits at 0 on the vertical axis
_ORIGIN = 7 * 2 + LETTERS.index("E")


def diatonic_height(p: Pitch) -> int:
    """Diatonic steps above E2 (equals the E-minor scale degree for scale pitches)."""
    return 7 * p.octave + LETTERS.index(p.letter) - _ORIGIN


@dataclass(frozen=True)
class PlotSpec:
    voices: tuple[str, ...] = VOICES
    mode: Literal["timeline", "overlay"] = "timeline"
    section_ticks: bool = True
    ornaments: bool = True
    stack_offset: float = 0.0
    width: float = 12.0
    height: float = 4.0

    def check(self, score: Score) -> None:
        present = {c.voice for c in score.cells}
        for v in self.voices:
            if v not in present:
                raise ValidationError(f"voice {v!r} is not present in the score")
        if self.mode not in ("timeline", "overlay"):
            raise ValidationError(f"unknown plot mode {self.mode!r}")


def timeline_data(score: Score, voice: str) -> dict:
    index = {slot: k for k, slot in enumerate(score.plan.all_slots())}
    xs, ys, oxs, oys = [], [], [], []
    for c in score.part(voice):
        x = index[(c.bar, c.syllable)]
        xs.append(x)
        ys.append(diatonic_height(c.main.pitch))
        if c.ornament is not None:
            oxs.append(x + 0.5)
            oys.append(diatonic_height(c.ornament.pitch))
    starts, seen = [], set()
    for b in score.plan:
        if b.section not in seen:
            seen.add(b.section)
            starts.append(index[(b.number, 0)])
    return {"x": xs, "y": ys, "ornament_x": oxs, "ornament_y": oys, "section_starts": starts}


def overlay_data(score: Score, voice: str) -> dict[int, dict]:
    """One trace per section, x counting the voice's own syllables in that section."""
    traces: dict[int, dict] = {}
    for c in score.part(voice):
        section = score.plan.bar(c.bar).section
        t = traces.setdefault(section, {"x": [], "y": [], "pitches": [], "ornament_x": [], "ornament_y": []})
        x = len(t["x"])
        t["x"].append(x)
        t["y"].append(diatonic_height(c.main.pitch))
        t["pitches"].append(c.main.pitch)
        if c.ornament is not None:
            t["ornament_x"].append(x + 0.5)
            t["ornament_y"].append(diatonic_height(c.ornament.pitch))
    return traces


def render_svg(score: Score, spec: PlotSpec) -> str:
    spec.check(score)
    with plt.rc_context({"svg.hashsalt": "tintinnabuli", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(spec.width, spec.height))
        try:
            for voice in spec.voices:
                color = COLORS[voice]
                if spec.mode == "timeline":
                    d = timeline_data(score, voice)
                    ax.plot(d["x"], d["y"], ".", color=color, label=voice)
                    if spec.ornaments:
                        ax.plot(d["ornament_x"], d["ornament_y"], "+", color=color)
                    if spec.section_ticks:
                        for s in d["section_starts"]:
                            ax.axvline(s - 0.5, color="#cccccc", linewidth=0.5, zorder=0)
                else:
                    for section, t in sorted(overlay_data(score, voice).items()):
                        off = (section - 1) * spec.stack_offset
                        ys = [y + off for y in t["y"]]
                        ax.plot(t["x"], ys, "-", color=color, alpha=0.35, linewidth=0.8)
                        ax.plot(t["x"], ys, ".", color=color,
                                label=voice if section == 1 else None)
                        if spec.ornaments:
                            ax.plot(t["ornament_x"], [y + off for y in t["ornament_y"]], "+", color=color)
            ax.set_xlabel("syllable")
            ax.set_ylabel("diatonic pitch (E2 = 0)")
            ax.legend(loc="upper right", fontsize="small")
            buf = io.StringIO()
            fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
        finally:
            plt.close(fig)
    return buf.getvalue()
