import pytest

from tintinnabuli.config import ALPHA
from tintinnabuli.errors import ValidationError
from tintinnabuli.pitchspace import Pitch
from tintinnabuli.plot import PlotSpec, diatonic_height, overlay_data, render_svg, timeline_data


def test_diatonic_height():
    assert diatonic_height(Pitch.parse("E2")) == 0
    assert diatonic_height(Pitch.parse("F#2")) == 1
    assert diatonic_height(Pitch.parse("E3")) == 7


def test_overlay_first_trace_is_alpha(default_score):
    traces = overlay_data(default_score, "alto")
    assert [p.spelling for p in traces[1]["pitches"]] == list(ALPHA)
    assert sorted(traces) == list(range(1, 17))


def test_timeline_alto_arches(default_score):
    d = timeline_data(default_score, "alto")
    assert len(d["section_starts"]) == 16
    heads = [y for y, x in zip(d["y"], range(len(d["y"]))) if x % 16 == 0]
    assert set(heads) == {diatonic_height(Pitch.parse("E4"))}
    assert len(d["ornament_x"]) == default_score.ornament_count("alto")


def test_svg_is_deterministic(default_score):
    spec = PlotSpec(voices=("alto", "soprano"))
    a, b = render_svg(default_score, spec), render_svg(default_score, spec)
    assert a == b and a.lstrip().startswith("<?xml")


def test_overlay_svg(default_score):
    svg = render_svg(default_score, PlotSpec(voices=("alto",), mode="overlay", stack_offset=0.5))
    assert "<svg" in svg


def test_unknown_voice_rejected(default_score):
    only_sa = default_score.with_cells([c for c in default_score.cells if c.voice in ("soprano", "alto")])
    with pytest.raises(ValidationError):
        render_svg(only_sa, PlotSpec(voices=("bass",)))
