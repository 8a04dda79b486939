"""Syllable-aligned four-part score model."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional

from .errors import ValidationError
from .pitchspace import Pitch
from .plan import VOICES, PiecePlan

Slot = tuple[str, int, int]  # (voice, bar, syllable index in bar)


@dataclass(frozen=True)
class Note:
    pitch: Pitch
    duration: Fraction

    def __post_init__(self):
        d = Fraction(self.duration)
        if d <= 0:
            raise ValidationError(f"note duration must be positive, got {d}")
        object.__setattr__(self, "duration", d)


@dataclass(frozen=True)
class SyllableCell:
    """Everything one voice sings on one syllable.

    ``ornament`` is the second, slurred note of the syllable.  ``overflow``
    holds any further slurred notes; the generator never produces them but
    reference scores with melismas do.
    """

    voice: str
    bar: int
    syllable: int
    lyric: Optional[str]
    main: Note
    ornament: Optional[Note] = None
    overflow: tuple[Note, ...] = ()

    @property
    def slot(self) -> Slot:
        return (self.voice, self.bar, self.syllable)

    @property
    def slur(self) -> bool:
        return self.ornament is not None

    @property
    def duration(self) -> Fraction:
        return sum((n.duration for n in self.notes), Fraction(0))

    @property
    def notes(self) -> tuple[Note, ...]:
        extra = () if self.ornament is None else (self.ornament,)
        return (self.main, *extra, *self.overflow)


def _cell_key(c: SyllableCell):
    return (VOICES.index(c.voice), c.bar, c.syllable)


@dataclass(frozen=True)
class Score:
    plan: PiecePlan
    cells: tuple[SyllableCell, ...]
    title: str = "Summa"
    key: str = "E minor"
    triad: tuple[str, ...] = ("E", "G", "B")
    # import diagnostics; not part of the musical content
    anomalies: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(sorted(self.cells, key=_cell_key)))

    @cached_property
    def _by_slot(self) -> dict[Slot, SyllableCell]:
        return {c.slot: c for c in self.cells}

    def cell(self, voice: str, bar: int, syllable: int) -> Optional[SyllableCell]:
        return self._by_slot.get((voice, bar, syllable))

    def part(self, voice: str) -> list[SyllableCell]:
        return [c for c in self.cells if c.voice == voice]

    @cached_property
    def _by_bar(self) -> dict[int, list[SyllableCell]]:
        out: dict[int, list[SyllableCell]] = {}
        for c in self.cells:
            out.setdefault(c.bar, []).append(c)
        return out

    def bar_cells(self, bar: int, voice: Optional[str] = None) -> list[SyllableCell]:
        return [c for c in self._by_bar.get(bar, ()) if voice is None or c.voice == voice]

    def bar_length(self, bar: int) -> Fraction:
        """Length of a bar in quarters, taken from its longest part."""
        totals = {}
        for c in self.bar_cells(bar):
            totals[c.voice] = totals.get(c.voice, Fraction(0)) + c.duration
        return max(totals.values(), default=Fraction(0))

    def note_count(self, voice: Optional[str] = None) -> int:
        return sum(len(c.notes) for c in self.cells if voice is None or c.voice == voice)

    def ornament_count(self, voice: Optional[str] = None) -> int:
        return sum(c.ornament is not None for c in self.cells if voice is None or c.voice == voice)

    def with_cells(self, cells: Iterable[SyllableCell]) -> Score:
        return replace(self, cells=tuple(cells))

    def validate(self) -> None:
        """Check slot coverage against the plan and homophonic bar lengths."""
        expected = {(v, b, s) for v in VOICES for (b, s) in self.plan.voice_slots(v)}
        got = set(self._by_slot)
        if len(got) != len(self.cells):
            raise ValidationError("score has duplicate cells")
        if got != expected:
            missing = sorted(expected - got)[:5]
            extra = sorted(got - expected)[:5]
            raise ValidationError(f"cells do not match the plan; missing {missing}, unexpected {extra}")
        for bar in self.plan:
            lengths = set()
            for v in bar.voices:
                lengths.add(sum((c.duration for c in self.bar_cells(bar.number, v)), Fraction(0)))
            if len(lengths) != 1:
                raise ValidationError(f"bar {bar.number}: parts disagree on bar length {sorted(lengths)}")
            for s in range(bar.slots):
                durs = {self.cell(v, bar.number, s).duration for v in bar.voices}
                if len(durs) != 1:
                    raise ValidationError(f"bar {bar.number} syllable {s}: voices are not homophonic")
