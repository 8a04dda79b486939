"""Reconstruction of *Summa* from its rules.

Pipeline: plan -> alto -> bass -> soprano -> tenor -> ornaments ->
(optional) exit stripping -> rhythm -> :class:`~tintinnabuli.score.Score`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

from .config import SummaConfig
from .errors import AssemblyError, TintinnabuliError
from .pitchspace import Melody, Pitch
from .plan import PiecePlan, summa_plan
from .processes import OrnamentTrack, TintinnabuliProcess, run_process, tail_rotated_pattern_rule
from .score import Note, Score, SyllableCell

logger = logging.getLogger(__name__)

M_VOICES = ("alto", "bass")
T_VOICE_OF = {"soprano": "alto", "tenor": "bass"}


@dataclass(frozen=True)
class VoiceLine:
    voice: str
    main: Melody
    ornaments: OrnamentTrack
    slots: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not len(self.main) == len(self.ornaments) == len(self.slots):
            raise AssemblyError(self.voice, "main notes, ornaments and slots differ in length")


def _silent(n: int) -> OrnamentTrack:
    return OrnamentTrack((None,) * n)


def pattern_sequence(pattern: Sequence[Pitch], n: int, direction: str = "left") -> list[Pitch]:
    """First ``n`` notes of the endlessly repeated, tail-rotated ``pattern``.

    Pass ``k`` (0-based) of the pattern is its tail rotation by ``k``; this is
    the same indexing the ornament pattern rule uses.
    """
    rule = tail_rotated_pattern_rule(list(pattern), direction)
    return [rule(i) for i in range(n)]


def build_alto(config: SummaConfig, plan: PiecePlan) -> VoiceLine:
    slots = tuple(plan.voice_slots("alto"))
    notes = pattern_sequence(config.pattern, len(slots), config.rotation_direction)
    return VoiceLine("alto", Melody(config.m_space, tuple(notes)), _silent(len(slots)), slots)


def build_bass(config: SummaConfig, plan: PiecePlan) -> VoiceLine:
    """Mirror the alto's pattern stream about the center, then transpose it.

    The bass reads the same running stream as the alto, indexed by its own
    slots, so it can run past the alto's last note in the final section.
    """
    M = config.m_space
    slots = tuple(plan.voice_slots("bass"))
    center = M.spell(Pitch.parse(config.bass_mirror_center))
    source = pattern_sequence(config.pattern, len(slots), config.rotation_direction)
    notes = tuple(M.transpose(M.mirror(p, center), config.bass_transposition) for p in source)
    return VoiceLine("bass", Melody(M, notes), _silent(len(slots)), slots)


def build_t_voice(config: SummaConfig, m_line: VoiceLine, voice: str, position: int) -> VoiceLine:
    proc = TintinnabuliProcess(
        "step", config.t_space, position=position,
        lookahead=config.descending_step_lookahead,
        allow_zero_position=config.allow_zero_position,
    )
    main = run_process(proc, m_line.main)
    return VoiceLine(voice, main, _silent(len(main)), m_line.slots)


def build_ornaments(config: SummaConfig, lines: dict[str, VoiceLine]) -> dict[str, VoiceLine]:
    T = config.t_space
    procs = {
        "soprano": TintinnabuliProcess("repeat-previous", T, bounds=config.soprano_bounds),
        "tenor": TintinnabuliProcess("repeat-previous", T, bounds=config.tenor_bounds),
        "alto": TintinnabuliProcess("tail-rotated-pattern", T, pattern=config.alto_ornament_pitches,
                                    rotation_direction=config.rotation_direction),
        "bass": TintinnabuliProcess("tail-rotated-pattern", T, pattern=config.bass_ornament_pitches,
                                    rotation_direction=config.rotation_direction),
    }
    out = {}
    for voice, line in lines.items():
        orn = run_process(procs[voice], line.main)
        out[voice] = replace(line, ornaments=orn)
    return out


def strip_ornamented_exits(lines: dict[str, VoiceLine], plan: PiecePlan) -> tuple[dict[str, VoiceLine], int]:
    """Drop ornaments on a voice's last syllable before it falls silent.

    Returns the new lines and the number of ornaments removed.
    """
    out, removed = {}, 0
    for voice, line in lines.items():
        entries = list(line.ornaments)
        for k, (bar, syl) in enumerate(line.slots):
            last = syl == plan.bar(bar).slots - 1
            if entries[k] is not None and last and plan.is_exit(voice, bar):
                entries[k] = None
                removed += 1
        out[voice] = replace(line, ornaments=OrnamentTrack(tuple(entries)))
    return out, removed


def syllable_duration(score: Score, bar: int, syllable: int) -> Fraction:
    """2 quarters if an active alto or bass note is ornamented, else 1."""
    for v in M_VOICES:
        c = score.cell(v, bar, syllable)
        if c is not None and c.ornament is not None:
            return Fraction(2)
    return Fraction(1)


def derive_rhythm(score: Score) -> Score:
    """Recompute every duration from the ornament rule.

    The syllable duration is split evenly over the notes a voice sings on it.
    """
    cells = []
    for c in score.cells:
        D = syllable_duration(score, c.bar, c.syllable)
        d = D / len(c.notes)
        cells.append(replace(
            c,
            main=Note(c.main.pitch, d),
            ornament=None if c.ornament is None else Note(c.ornament.pitch, d),
            overflow=tuple(Note(n.pitch, d) for n in c.overflow),
        ))
    return score.with_cells(cells)


def assign_rhythm(lines: dict[str, VoiceLine], plan: PiecePlan, title: str = "Summa") -> Score:
    cells = []
    for voice, line in lines.items():
        for k, (bar, syl) in enumerate(line.slots):
            orn = line.ornaments[k]
            cells.append(SyllableCell(
                voice, bar, syl, plan.bar(bar).lyrics[syl],
                Note(line.main[k], Fraction(1)),
                None if orn is None else Note(orn, Fraction(1)),
            ))
    return derive_rhythm(Score(plan, tuple(cells), title=title))


def build_lines(config: SummaConfig, plan: PiecePlan) -> dict[str, VoiceLine]:
    """All four voices with ornaments, before exit stripping and rhythm."""
    stage = "alto"
    try:
        alto = build_alto(config, plan)
        stage = "bass"
        bass = build_bass(config, plan)
        stage = "soprano"
        soprano = build_t_voice(config, alto, "soprano", config.soprano_position)
        stage = "tenor"
        tenor = build_t_voice(config, bass, "tenor", config.tenor_position)
        stage = "ornaments"
        return build_ornaments(config, {"soprano": soprano, "alto": alto, "tenor": tenor, "bass": bass})
    except AssemblyError:
        raise
    except TintinnabuliError as exc:
        raise AssemblyError(stage, str(exc)) from exc


def assemble(config: Optional[SummaConfig] = None, plan: Optional[PiecePlan] = None) -> Score:
    config = config or SummaConfig()
    plan = plan or summa_plan(config.pad_final_section)
    lines = build_lines(config, plan)
    if config.strip_ornamented_exits:
        lines, removed = strip_ornamented_exits(lines, plan)
        logger.info("stripped %d ornamented exits", removed)
    try:
        return assign_rhythm(lines, plan, config.title)
    except TintinnabuliError as exc:
        raise AssemblyError("rhythm", str(exc)) from exc
