"""Compare a reconstruction with a reference score, syllable by syllable.

Every difference becomes an :class:`ErrorRecord` of one kind:

* ``pitch`` - a main note (or an ornament present in both) has the wrong pitch
* ``ornament-insertion`` - the reconstruction has a note the reference lacks
* ``ornament-deletion`` - the reference has a note the reconstruction lacks
* ``duration`` - same notes, different length; usually a side effect of an
  insertion or deletion in an M-voice on the same syllable
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import AlignmentError, ValidationError
from .plan import VOICES, PiecePlan
from .score import Note, Score, Slot, SyllableCell
from .summa import M_VOICES, derive_rhythm

PITCH = "pitch"
INSERTION = "ornament-insertion"
DELETION = "ornament-deletion"
DURATION = "duration"
KINDS = (PITCH, INSERTION, DELETION, DURATION)

#: How an ornament present on both sides but with different pitches is counted.
ORNAMENT_PITCH_RULE = "pitch"


@dataclass(frozen=True)
class AlignedSlot:
    slot: Slot
    recon: Optional[SyllableCell]
    ref: Optional[SyllableCell]
    irregular: bool = False

    @property
    def paired(self) -> bool:
        return self.recon is not None and self.ref is not None


@dataclass(frozen=True)
class Alignment:
    slots: tuple[AlignedSlot, ...]
    irregular_bars: tuple[int, ...]

    @property
    def unpaired(self) -> list[AlignedSlot]:
        return [a for a in self.slots if not a.paired]

    def describe_unpaired(self) -> list[str]:
        out = []
        for a in self.unpaired:
            v, bar, syl = a.slot
            side = "reference" if a.recon is None else "reconstruction"
            out.append(f"{v} bar {bar} syllable {syl}: only in the {side}")
        return out


def align(recon: Score, ref: Score, final_bars: int = 2) -> Alignment:
    """Pair cells slot by slot; the last ``final_bars`` bars are marked irregular."""
    if len(recon.plan) != len(ref.plan):
        raise AlignmentError(
            f"reconstruction has {len(recon.plan)} bars, reference has {len(ref.plan)}"
        )
    n = len(recon.plan)
    irregular = tuple(range(max(1, n - final_bars + 1), n + 1))
    keys = sorted(
        {c.slot for c in recon.cells} | {c.slot for c in ref.cells},
        key=lambda s: (s[1], s[2], VOICES.index(s[0])),
    )
    return Alignment(
        tuple(AlignedSlot(k, recon.cell(*k), ref.cell(*k), k[1] in irregular) for k in keys),
        irregular,
    )


@dataclass(frozen=True)
class ErrorRecord:
    voice: str
    bar: int
    syllable: int
    kind: str
    note: str  # "main", "ornament" or "overflow:<n>"
    recon: Optional[str]
    ref: Optional[str]
    irregular: bool = False

    @property
    def slot(self) -> Slot:
        return (self.voice, self.bar, self.syllable)


def _fmt(n: Optional[Note]) -> Optional[str]:
    return None if n is None else f"{n.pitch.spelling}:{n.duration}"


def _labels(cell: SyllableCell) -> list[tuple[str, Note]]:
    out = [("main", cell.main)]
    if cell.ornament is not None:
        out.append(("ornament", cell.ornament))
    out += [(f"overflow:{k}", n) for k, n in enumerate(cell.overflow)]
    return out


def classify(alignment: Alignment | Iterable[AlignedSlot]) -> list[ErrorRecord]:
    slots = alignment.slots if isinstance(alignment, Alignment) else tuple(alignment)
    records: list[ErrorRecord] = []
    for a in slots:
        v, bar, syl = a.slot

        def rec(kind, note, r, f):
            records.append(ErrorRecord(v, bar, syl, kind, note, _fmt(r), _fmt(f), a.irregular))

        r, f = a.recon, a.ref
        if r is None and f is None:
            continue
        if f is None:
            for label, n in _labels(r):
                rec(INSERTION, label, n, None)
            continue
        if r is None:
            for label, n in _labels(f):
                rec(DELETION, label, None, n)
            continue

        if r.main.pitch != f.main.pitch:
            rec(PITCH, "main", r.main, f.main)
        if r.ornament is not None and f.ornament is None:
            rec(INSERTION, "ornament", r.ornament, None)
        elif r.ornament is None and f.ornament is not None:
            rec(DELETION, "ornament", None, f.ornament)
        elif r.ornament is not None and r.ornament.pitch != f.ornament.pitch:
            rec(PITCH, "ornament", r.ornament, f.ornament)
        common = min(len(r.overflow), len(f.overflow))
        for k in range(common):
            if r.overflow[k].pitch != f.overflow[k].pitch:
                rec(PITCH, f"overflow:{k}", r.overflow[k], f.overflow[k])
        for k in range(common, len(r.overflow)):
            rec(INSERTION, f"overflow:{k}", r.overflow[k], None)
        for k in range(common, len(f.overflow)):
            rec(DELETION, f"overflow:{k}", None, f.overflow[k])

        # a changed note count already explains this slot's own durations
        if len(r.notes) == len(f.notes):
            for (label, rn), (_, fn) in zip(_labels(r), _labels(f)):
                if rn.duration != fn.duration:
                    rec(DURATION, label, rn, fn)
    return records


@dataclass
class ErrorReport:
    records: list[ErrorRecord]
    total_notes: int
    counts: dict[str, int]
    per_voice: dict[str, dict[str, int]]
    notes_with_errors: int
    notes_to_correct: int
    duration_explained: int
    final_region: dict[str, int]
    without_ending: bool = False
    flags: dict = field(default_factory=dict)
    unpaired: list[str] = field(default_factory=list)

    @property
    def error_rate(self) -> float:
        return self.notes_with_errors / self.total_notes if self.total_notes else 0.0

    @property
    def correction_rate(self) -> float:
        return self.notes_to_correct / self.total_notes if self.total_notes else 0.0

    def to_dict(self) -> dict:
        return {
            "total_notes": self.total_notes,
            "notes_with_errors": self.notes_with_errors,
            "notes_to_correct": self.notes_to_correct,
            "error_rate": round(self.error_rate, 6),
            "correction_rate": round(self.correction_rate, 6),
            "counts": self.counts,
            "per_voice": self.per_voice,
            "duration_explained": self.duration_explained,
            "final_region": self.final_region,
            "without_ending": self.without_ending,
            "ornament_pitch_mismatch_counted_as": ORNAMENT_PITCH_RULE,
            "flags": self.flags,
            "unpaired": self.unpaired,
            "records": [asdict(r) for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def table(self) -> str:
        cols = ("pitch", "insert", "delete", "duration", "correct")
        lines = [f"{'voice':<8}" + "".join(f"{c:>10}" for c in cols)]
        rows = [*VOICES, "total"]
        for v in rows:
            d = self.counts if v == "total" else self.per_voice[v]
            vals = (d[PITCH], d[INSERTION], d[DELETION], d[DURATION], d["to_correct"])
            lines.append(f"{v:<8}" + "".join(f"{x:>10}" for x in vals))
        lines.append(
            f"notes {self.total_notes}, with errors {self.notes_with_errors} "
            f"({100 * self.error_rate:.1f}%), to correct {self.notes_to_correct} "
            f"({100 * self.correction_rate:.1f}%)"
        )
        return "\n".join(lines)


def _count(records: Sequence[ErrorRecord]) -> dict[str, int]:
    c = Counter(r.kind for r in records)
    out = {k: c.get(k, 0) for k in KINDS}
    out["to_correct"] = out[PITCH] + out[INSERTION] + out[DELETION]
    return out


def summarize(records: Sequence[ErrorRecord], recon: Score, without_ending: bool = False,
              flags: Optional[dict] = None, unpaired: Optional[list[str]] = None) -> ErrorReport:
    final = [r for r in records if r.irregular]
    counted = [r for r in records if not (without_ending and r.irregular)]
    counts = _count(counted)
    per_voice = {v: _count([r for r in counted if r.voice == v]) for v in VOICES}
    notes = {(r.voice, r.bar, r.syllable, r.note) for r in counted}
    ornament_changes = {(r.bar, r.syllable, r.voice) for r in counted if r.kind in (INSERTION, DELETION)}
    explained = sum(
        1 for r in counted
        if r.kind == DURATION and any(
            (r.bar, r.syllable, v) in ornament_changes for v in VOICES if v != r.voice
        )
    )
    total = recon.note_count()
    if without_ending:
        total -= sum(len(c.notes) for c in recon.cells if c.bar > len(recon.plan) - 2)
    return ErrorReport(
        records=list(counted),
        total_notes=total,
        counts=counts,
        per_voice=per_voice,
        notes_with_errors=len(notes),
        notes_to_correct=counts["to_correct"],
        duration_explained=explained,
        final_region=_count(final),
        without_ending=without_ending,
        flags=dict(flags or {}),
        unpaired=list(unpaired or []),
    )


def evaluate(recon: Score, ref: Score, without_ending: bool = False, flags: Optional[dict] = None) -> ErrorReport:
    alignment = align(recon, ref)
    return summarize(classify(alignment), recon, without_ending, flags, alignment.describe_unpaired())


# -- corrections -------------------------------------------------------------------------

Correction = tuple[Slot, Optional[SyllableCell]]


def derive_corrections(recon: Score, ref: Score) -> list[Correction]:
    """Replacement cells for every slot with a non-duration error.

    Corrections come syllable by syllable (M-voices first), so a syllable is
    always fixed as a unit; duration errors vanish once rhythm is re-derived.
    """
    alignment = align(recon, ref)
    bad = {r.slot for r in classify(alignment) if r.kind != DURATION}
    out = []
    for a in alignment.slots:
        if a.slot in bad:
            out.append((a.slot, a.ref))
    order = {v: k for k, v in enumerate((*M_VOICES, "soprano", "tenor"))}
    out.sort(key=lambda c: (c[0][1], c[0][2], order[c[0][0]]))
    return out


def apply_corrections(score: Score, corrections: Iterable[Correction], plan: Optional[PiecePlan] = None) -> Score:
    """Replace the given cells (``None`` removes a cell) and re-derive rhythm."""
    target_plan = plan or score.plan
    cells = {c.slot: c for c in score.cells}
    for slot, cell in corrections:
        voice, bar, syl = slot
        if voice not in VOICES or not 1 <= bar <= len(target_plan) or syl < 0:
            raise ValidationError(f"invalid slot {slot}")
        if cell is None:
            cells.pop(slot, None)
        else:
            if cell.slot != slot:
                raise ValidationError(f"cell for {cell.slot} given for slot {slot}")
            cells[slot] = cell
    return derive_rhythm(Score(target_plan, tuple(cells.values()), score.title, score.key, score.triad))
