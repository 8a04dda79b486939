import dataclasses
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import random_config
from tintinnabuli import SummaConfig, assemble
from tintinnabuli.config import ALPHA
from tintinnabuli.errors import AssemblyError, ConfigurationError, ValidationError
from tintinnabuli.jsonio import export_json
from tintinnabuli.pitchspace import Pitch
from tintinnabuli.plan import EXTENDER, summa_plan
from tintinnabuli.summa import build_alto, build_bass, build_lines, strip_ornamented_exits


def expected_table():
    """(voicing, syllables) per bar, from the 7/9/7 mirrored section rule."""
    rows = []
    for section in range(1, 16):
        order = ("SA", "SATB", "TB") if section % 2 else ("TB", "SATB", "SA")
        rows += list(zip(order, (7, 9, 7)))
    rows += [("TB", 7), ("SATB", 9), ("SA", 4), ("SATB", 1)]
    return rows


# -- plan -------------------------------------------------------------------------------

def test_plan_matches_table():
    plan = summa_plan()
    assert len(plan) == 49
    assert plan.sections == list(range(1, 17))
    assert [(b.voicing, b.syllables) for b in plan] == expected_table()
    assert plan.total_syllables == 366
    assert plan.total_slots == 368
    assert all(plan.section_slots(s) == 23 for s in range(1, 17))


def test_plan_lyrics():
    plan = summa_plan()
    assert plan.bar(1).lyrics == ("Cre-", "do", "in", "u-", "num", "de-", "um,")
    assert plan.bar(2).lyrics[0] == "Pa-"
    assert plan.bar(49).lyrics == ("men", EXTENDER, EXTENDER)


def test_unpadded_plan():
    plan = summa_plan(pad_final_section=False)
    assert plan.total_slots == 366
    assert plan.bar(49).slots == 1


# -- voices -----------------------------------------------------------------------------

def names(line):
    return [p.spelling for p in line]


def test_alto_first_section_is_alpha(default_score):
    alto = [c.main.pitch.spelling for c in default_score.part("alto")]
    assert alto[:16] == list(ALPHA)


def test_alto_sections_are_tail_rotations():
    plan = summa_plan()
    alto = build_alto(SummaConfig(), plan)
    notes = names(alto.main)
    for k in range(16):
        block = notes[16 * k:16 * (k + 1)]
        assert block[0] == "E4"
        tail = list(ALPHA[1:])
        assert block[1:] == (tail[k % 15:] + tail[:k % 15])[:len(block) - 1]


def test_alto_per_section_count():
    plan = summa_plan()
    for s in range(1, 16):
        bars = [b for b in plan if b.section == s and b.has("alto")]
        assert sum(b.slots for b in bars) == 16


def test_bass_heads_are_tonic():
    plan = summa_plan()
    bass = build_bass(SummaConfig(), plan)
    heads = [bass.main[k].spelling for k in range(0, len(bass.main), 16)]
    assert set(heads) == {"E3"}
    assert names(bass.main)[:16] == [
        "E3", "F#3", "G3", "A3", "B3", "C4", "D4", "C4", "B3", "A3", "G3", "F#3", "E3", "D3", "C3", "D3",
    ]


def test_bass_literal_transposition_starts_on_f_sharp():
    bass = build_bass(SummaConfig(bass_transposition=-6), summa_plan())
    assert bass.main[0].spelling == "F#3"


def test_soprano_over_first_c4_is_b4(default_score):
    cells = default_score.part("alto")
    k = next(i for i, c in enumerate(cells) if c.main.pitch == Pitch.parse("C4"))
    sop = default_score.cell("soprano", cells[k].bar, cells[k].syllable)
    assert sop.main.pitch.spelling == "B4"
    assert default_score.part("soprano")[0].main.pitch.spelling == "B4"


def test_alto_ornaments_first_section(default_score):
    orn = [(c.main.pitch.spelling, c.ornament.pitch.spelling)
           for c in default_score.part("alto")[:16] if c.ornament]
    assert orn == [("D4", "G3"), ("G3", "B3"), ("G3", "E3"), ("C4", "B3")]


def test_default_bass_has_no_ornaments(default_score):
    assert default_score.ornament_count("bass") == 0


def test_membership_and_pitch_classes(default_score):
    cfg = SummaConfig()
    for c in default_score.cells:
        space = cfg.m_space if c.voice in ("alto", "bass") else cfg.t_space
        assert c.main.pitch in space
        if c.ornament is not None:
            assert c.ornament.pitch in cfg.t_space
    pcs = {n.pitch.pitch_class for c in default_score.cells for n in c.notes}
    assert pcs <= {4, 6, 7, 9, 11, 0, 2}


def test_voices_follow_voicing(default_score):
    plan = default_score.plan
    for voice in ("soprano", "alto", "tenor", "bass"):
        got = {(c.bar, c.syllable) for c in default_score.part(voice)}
        assert got == set(plan.voice_slots(voice))
    bars = lambda v: {c.bar for c in default_score.part(v)}  # noqa: E731
    assert bars("alto") == bars("soprano")
    assert bars("tenor") == bars("bass")


def test_soprano_step_constraints(default_score):
    cfg = SummaConfig()
    T = cfg.t_space
    sop = default_score.part("soprano")
    for a, b in zip(sop, sop[1:]):
        assert abs(T.degree(a.main.pitch) - T.degree(b.main.pitch)) == 1


# -- rhythm -----------------------------------------------------------------------------

def check_rhythm(score):
    for c in score.cells:
        if c.voice in ("alto", "bass"):
            assert c.main.duration >= 1
        assert sum(n.duration for n in c.notes) == c.duration
    for bar in score.plan:
        for syl in range(bar.slots):
            cells = [score.cell(v, bar.number, syl) for v in bar.voices]
            ornamented = any(c.ornament is not None for c in cells if c.voice in ("alto", "bass"))
            assert {c.duration for c in cells} == {Fraction(2) if ornamented else Fraction(1)}
        lengths = {sum(c.duration for c in score.bar_cells(bar.number, v)) for v in bar.voices}
        assert len(lengths) == 1


def test_rhythm_default(default_score):
    check_rhythm(default_score)
    default_score.validate()


@given(st.randoms(use_true_random=False))
def test_rhythm_random_configs(rng):
    score = assemble(random_config(rng))
    check_rhythm(score)
    score.validate()


# -- determinism and variants -----------------------------------------------------------

def test_assemble_is_deterministic():
    assert export_json(assemble()) == export_json(assemble())


def test_strip_ornamented_exits():
    plan = summa_plan()
    lines = build_lines(SummaConfig(), plan)
    stripped, removed = strip_ornamented_exits(lines, plan)
    assert removed > 0
    again, removed_again = strip_ornamented_exits(stripped, plan)
    assert removed_again == 0 and again == stripped
    base = assemble()
    after = assemble(SummaConfig(strip_ornamented_exits=True))
    assert base.note_count() - after.note_count() == removed


def test_right_rotation_changes_second_section():
    left = assemble()
    right = assemble(SummaConfig(rotation_direction="right"))
    alto = lambda s: [c.main.pitch.spelling for c in s.part("alto")]  # noqa: E731
    assert alto(left)[:16] == alto(right)[:16]
    assert alto(left)[16:32] != alto(right)[16:32]
    assert alto(right)[17] == ALPHA[-1]


def test_drop_last_pattern_note():
    cfg = SummaConfig(drop_last_pattern_note=True)
    assert len(cfg.pattern) == 15
    assemble(cfg).validate()


def test_bad_config_values():
    with pytest.raises(ValidationError):
        SummaConfig(rotation_direction="up")
    with pytest.raises(ValidationError):
        SummaConfig(alto_ornament_pattern=(None,) * 15)
    with pytest.raises(ValidationError):
        SummaConfig(bass_ornament_pattern=("A3",) + (None,) * 15)
    with pytest.raises(ConfigurationError):
        SummaConfig.from_dict({"no_such_key": 1})


def test_zero_position_is_an_assembly_error():
    with pytest.raises(AssemblyError) as info:
        assemble(SummaConfig(soprano_position=0))
    assert info.value.stage == "soprano"


def test_config_json_round_trip(tmp_path):
    cfg = SummaConfig(bass_transposition=-6, rotation_direction="right")
    path = tmp_path / "cfg.json"
    path.write_text(cfg.to_json())
    assert SummaConfig.load(path) == cfg


def test_flags_report_the_readings():
    flags = SummaConfig().flags()
    assert flags["rotation_direction"] == "left"
    assert flags["bass_transposition"] == -7
    assert flags["pattern_length"] == 16
    assert dataclasses.replace(SummaConfig(), drop_last_pattern_note=True).flags()["pattern_length"] == 15


def test_random_configs_assemble():
    rng = random.Random(3)
    for _ in range(10):
        assemble(random_config(rng)).validate()
