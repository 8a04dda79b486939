"""Acceptance gate: one test per criterion, each reported as a PASS/FAIL line.

Criterion 10 needs a reference MusicXML transcription; point the
``TINTINNABULI_REFERENCE`` environment variable at one to enable it.
"""

import os
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import pytest

from conftest import ACCEPTANCE_LINES
from oracles import brute_step, inject, random_config, random_stepwise_melody
from tintinnabuli import SummaConfig, assemble
from tintinnabuli.config import ALPHA
from tintinnabuli.evaluate import DELETION, DURATION, INSERTION, PITCH, align, apply_corrections, classify
from tintinnabuli.evaluate import derive_corrections, evaluate
from tintinnabuli.jsonio import export_json, import_json
from tintinnabuli.musicxml import export_musicxml, import_musicxml
from tintinnabuli.pitchspace import Melody, Pitch, PitchSpace, minor_triad, natural_minor
from tintinnabuli.plan import summa_plan
from tintinnabuli.processes import TintinnabuliProcess, glue, mode, position_of, run_process, t_position
from tintinnabuli.summa import build_alto

M = PitchSpace(natural_minor("E4"))
T = PitchSpace(minor_triad("E4"))

# bar: voicing, syllable count
TABLE = """
1 SA 7; 2 SATB 9; 3 TB 7; 4 TB 7; 5 SATB 9; 6 SA 7; 7 SA 7; 8 SATB 9; 9 TB 7;
10 TB 7; 11 SATB 9; 12 SA 7; 13 SA 7; 14 SATB 9; 15 TB 7; 16 TB 7; 17 SATB 9;
18 SA 7; 19 SA 7; 20 SATB 9; 21 TB 7; 22 TB 7; 23 SATB 9; 24 SA 7; 25 SA 7;
26 SATB 9; 27 TB 7; 28 TB 7; 29 SATB 9; 30 SA 7; 31 SA 7; 32 SATB 9; 33 TB 7;
34 TB 7; 35 SATB 9; 36 SA 7; 37 SA 7; 38 SATB 9; 39 TB 7; 40 TB 7; 41 SATB 9;
42 SA 7; 43 SA 7; 44 SATB 9; 45 TB 7; 46 TB 7; 47 SATB 9; 48 SA 4; 49 SATB 1
"""


def table_rows():
    rows = []
    for item in TABLE.replace("\n", " ").split(";"):
        bar, voicing, count = item.split()
        rows.append((int(bar), voicing, int(count)))
    return rows


@contextmanager
def criterion(number, title):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        if isinstance(exc, pytest.skip.Exception):
            ACCEPTANCE_LINES.append(f"[{number:>2}] SKIP {title}: {exc}")
        else:
            first = str(exc).strip().splitlines()[0] if str(exc).strip() else type(exc).__name__
            ACCEPTANCE_LINES.append(f"[{number:>2}] FAIL {title}: {first}")
        raise
    ACCEPTANCE_LINES.append(f"[{number:>2}] PASS {title} ({time.perf_counter() - start:.2f} s)")


def test_criterion_01_pattern_fidelity():
    with criterion(1, "pattern fidelity"):
        start = time.perf_counter()
        alto = build_alto(SummaConfig(), summa_plan())
        assert [p.spelling for p in alto.main][:16] == list(ALPHA)
        built = glue(mode(M, 2, 6, Pitch.parse("E4")), mode(M, 4, 6, Pitch.parse("D4")),
                     mode(M, 1, 2, Pitch.parse("E4")), mode(M, 3, 2, Pitch.parse("F#4")))
        assert [p.spelling for p in built] == list(ALPHA)
        assert time.perf_counter() - start < 1.0


def test_criterion_02_structure():
    with criterion(2, "structure"):
        plan = summa_plan()
        assert len(plan) == 49
        assert plan.sections == list(range(1, 17))
        assert [(b.number, b.voicing, b.syllables) for b in plan] == table_rows()
        assert plan.total_slots == 368
        assert all(plan.section_slots(s) == 23 for s in range(1, 17))


def test_criterion_03_t_position_anchors():
    with criterion(3, "T_p anchors and inverse"):
        for m in [p for p in M if Pitch.parse("E4") <= p < Pitch.parse("E5")]:
            for p in range(-4, 5):
                assert position_of(T, m, t_position(T, m, p)) == p
        assert t_position(T, Pitch.parse("A3"), 2) == Pitch.parse("E4")
        got = t_position(T, Pitch.parse("A3"), -1)
        assert got == Pitch.parse("E3"), (
            f"T_-1(A3) = {got.spelling}, expected E3; G3 is a triad member between E3 and A3"
        )


def test_criterion_04_soprano_anchor():
    with criterion(4, "soprano anchor"):
        score = assemble()
        alto = score.part("alto")
        first_c4 = next(c for c in alto if c.main.pitch == Pitch.parse("C4"))
        assert score.part("soprano")[0].main.pitch == t_position(T, Pitch.parse("E4"), 2)
        assert score.cell("soprano", first_c4.bar, first_c4.syllable).main.pitch.spelling == "B4"


def test_criterion_05_note_count():
    with criterion(5, "note count 1288 +- 1%"):
        start = time.perf_counter()
        cfg = SummaConfig()
        score = assemble(cfg)
        elapsed = time.perf_counter() - start
        flags = cfg.flags()
        assert {"rotation_direction", "bass_transposition", "pattern_length"} <= set(flags)
        assert elapsed < 1.0
        n = score.note_count()
        assert abs(n - 1288) <= 0.01 * 1288, (
            f"{n} notes with flags {flags}; no bass ornament pattern is available by default"
        )


def test_criterion_06_step_oracle():
    with criterion(6, "step process equals brute-force search"):
        rng = random.Random(20240601)
        start = time.perf_counter()
        for _ in range(1000):
            m = random_stepwise_melody(rng)
            p = rng.choice([1, 2, 3])
            proc = TintinnabuliProcess("step", T, position=p)
            got = run_process(proc, Melody(M, tuple(Pitch(i) for i in m)))
            assert [x.index for x in got] == brute_step(m, p), (m, p)
        assert time.perf_counter() - start < 10.0


def test_criterion_07_evaluator_soundness():
    with criterion(7, "evaluator soundness"):
        rng = random.Random(77)
        for _ in range(100):
            score = assemble(random_config(rng))
            assert classify(align(score, score)) == []
            k = rng.randint(1, 20)
            mutated, injected = inject(score, rng, k)
            recs = classify(align(mutated, score))
            primary = [r for r in recs if r.kind != DURATION]
            assert len(primary) == k
            assert {r.slot: r.kind for r in primary} == injected
            places = {(bar, syl) for _, bar, syl in injected}
            assert all((r.bar, r.syllable) in places for r in recs if r.kind == DURATION)
            fixed = apply_corrections(mutated, derive_corrections(mutated, score))
            assert classify(align(fixed, score)) == []


def test_criterion_08_rhythm():
    with criterion(8, "rhythm invariants"):
        score = assemble()
        for c in score.cells:
            if c.voice in ("alto", "bass"):
                assert c.main.duration >= 1
        for bar in score.plan:
            lengths = {sum(c.duration for c in score.bar_cells(bar.number, v)) for v in bar.voices}
            assert len(lengths) == 1
            for syl in range(bar.slots):
                cells = [score.cell(v, bar.number, syl) for v in bar.voices]
                ornamented = any(c.ornament is not None for c in cells if c.voice in ("alto", "bass"))
                want = Fraction(2) if ornamented else Fraction(1)
                assert all(c.duration == want for c in cells)


def test_criterion_09_round_trips():
    with criterion(9, "MusicXML and JSON round trips"):
        rng = random.Random(99)
        for _ in range(100):
            score = assemble(random_config(rng))
            assert import_json(export_json(score)) == score
            assert import_musicxml(export_musicxml(score), score.plan) == score


REFERENCE = os.environ.get("TINTINNABULI_REFERENCE")


def test_criterion_10_reference_statistics():
    with criterion(10, "reference statistics (conditional)"):
        if not REFERENCE:
            pytest.skip("no reference transcription supplied")
        ref = import_musicxml(Path(REFERENCE).read_bytes(), summa_plan())
        base_cfg = SummaConfig()
        before = evaluate(assemble(base_cfg), ref, flags=base_cfg.flags())
        strip_cfg = SummaConfig(strip_ornamented_exits=True)
        after = evaluate(assemble(strip_cfg), ref, flags=strip_cfg.flags())
        tol = 3
        problems = []
        for name, got, want in [
            ("erroneous notes", before.notes_with_errors, 106),
            ("pitch errors", before.counts[PITCH], 2),
            ("deletions", before.counts[DELETION], 15),
            ("insertions", before.counts[INSERTION], 34),
            ("errors after stripping", after.notes_with_errors, 86),
            ("notes to correct after stripping", after.notes_to_correct, 45),
        ] + [
            (f"{v} to correct", after.per_voice[v]["to_correct"], want)
            for v, want in zip(("soprano", "alto", "tenor", "bass"), (19, 10, 7, 9))
        ]:
            if abs(got - want) > tol:
                problems.append(f"{name} {got} vs {want}")
        assert not problems, f"{'; '.join(problems)} (flags {after.flags})"
