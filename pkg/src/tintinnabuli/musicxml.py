"""MusicXML 3.1 partwise export and import.

Export writes one part per voice, an explicit ``n/4`` time signature in every
bar, whole-bar rests for silent voices, a rehearsal mark at each section
start, the lyric on the first note of a syllable and a slur over the
syllable's notes.  Import inverts this: a lyric (or, in bars without lyrics,
any unslurred note) opens a syllable, the slurred second note becomes the
ornament and anything after that lands in ``overflow``.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from fractions import Fraction
from typing import Optional

from .errors import ScoreImportError, TintinnabuliError, ValidationError
from .pitchspace import Pitch
from .plan import EXTENDER, VOICES, Bar, PiecePlan
from .score import Note, Score, SyllableCell

DIVISIONS = 2
PART_NAMES = {"soprano": "Soprano", "alto": "Alto", "tenor": "Tenor", "bass": "Bass"}
CLEFS = {"soprano": ("G", "2", None), "alto": ("G", "2", None),
         "tenor": ("G", "2", "-1"), "bass": ("F", "4", None)}
NOTE_TYPES = {
    Fraction(1, 2): ("eighth", 0), Fraction(3, 4): ("eighth", 1),
    Fraction(1): ("quarter", 0), Fraction(3, 2): ("quarter", 1),
    Fraction(2): ("half", 0), Fraction(3): ("half", 1),
    Fraction(4): ("whole", 0), Fraction(6): ("whole", 1),
}
KEY_FIFTHS = {"E minor": ("1", "minor")}


def _sub(parent, tag, text=None, **attrib):
    el = ET.SubElement(parent, tag, attrib)
    if text is not None:
        el.text = str(text)
    return el


def _divisions(d: Fraction) -> int:
    q = Fraction(d) * DIVISIONS
    if q.denominator != 1:
        raise ValidationError(f"duration {d} is not a multiple of an eighth note")
    return int(q)


def _syllabic(text: str, prev: Optional[str]) -> tuple[str, str]:
    cont_before = prev is not None and prev.endswith("-")
    cont_after = text.endswith("-")
    word = text[:-1] if cont_after else text
    if cont_before and cont_after:
        return "middle", word
    if cont_after:
        return "begin", word
    if cont_before:
        return "end", word
    return "single", word


def _write_note(measure, note: Note, slur: Optional[str], lyric: Optional[str], prev_lyric: Optional[str]):
    el = _sub(measure, "note")
    p = _sub(el, "pitch")
    _sub(p, "step", note.pitch.letter)
    if note.pitch.alter:
        _sub(p, "alter", note.pitch.alter)
    _sub(p, "octave", note.pitch.octave)
    _sub(el, "duration", _divisions(note.duration))
    _sub(el, "voice", 1)
    if note.duration in NOTE_TYPES:
        kind, dots = NOTE_TYPES[note.duration]
        _sub(el, "type", kind)
        for _ in range(dots):
            _sub(el, "dot")
    if slur:
        _sub(_sub(el, "notations"), "slur", type=slur, number="1")
    if lyric is not None:
        ly = _sub(el, "lyric", number="1")
        if lyric == EXTENDER:
            _sub(ly, "extend")
        else:
            syllabic, word = _syllabic(lyric, prev_lyric)
            _sub(ly, "syllabic", syllabic)
            _sub(ly, "text", word)


def export_musicxml(score: Score) -> str:
    root = ET.Element("score-partwise", version="3.1")
    _sub(root, "movement-title", score.title)
    ident = _sub(root, "identification")
    misc = _sub(ident, "miscellaneous")
    _sub(misc, "miscellaneous-field", score.key, name="key")
    _sub(misc, "miscellaneous-field", " ".join(score.triad), name="triad")
    part_list = _sub(root, "part-list")
    for k, voice in enumerate(VOICES, start=1):
        sp = _sub(part_list, "score-part", id=f"P{k}")
        _sub(sp, "part-name", PART_NAMES[voice])

    first_of_section = {}
    for b in score.plan:
        first_of_section.setdefault(b.section, b.number)
    section_starts = {n: s for s, n in first_of_section.items()}

    for k, voice in enumerate(VOICES, start=1):
        part = _sub(root, "part", id=f"P{k}")
        prev_lyric = None
        for b in score.plan:
            length = score.bar_length(b.number)
            m = _sub(part, "measure", number=str(b.number))
            attrs = _sub(m, "attributes")
            if b.number == 1:
                _sub(attrs, "divisions", DIVISIONS)
                fifths, mode_ = KEY_FIFTHS.get(score.key, ("0", "major"))
                key = _sub(attrs, "key")
                _sub(key, "fifths", fifths)
                _sub(key, "mode", mode_)
            t = _sub(attrs, "time")
            _sub(t, "beats", length)
            _sub(t, "beat-type", 4)
            if b.number == 1:
                sign, line, octave_change = CLEFS[voice]
                clef = _sub(attrs, "clef")
                _sub(clef, "sign", sign)
                _sub(clef, "line", line)
                if octave_change:
                    _sub(clef, "clef-octave-change", octave_change)
            if b.number in section_starts:
                d = _sub(m, "direction", placement="above")
                _sub(_sub(d, "direction-type"), "rehearsal", section_starts[b.number])
            cells = score.bar_cells(b.number, voice)
            if not cells:
                rest = _sub(m, "note")
                _sub(rest, "rest", measure="yes")
                _sub(rest, "duration", _divisions(length))
                _sub(rest, "voice", 1)
                continue
            for c in cells:
                notes = c.notes
                for j, n in enumerate(notes):
                    slur = None
                    if len(notes) > 1:
                        slur = "start" if j == 0 else "stop" if j == len(notes) - 1 else "continue"
                    lyric = c.lyric if j == 0 else None
                    _write_note(m, n, slur, lyric, prev_lyric)
                if c.lyric is not None and c.lyric != EXTENDER:
                    prev_lyric = c.lyric
    ET.indent(root, space="  ")
    body = ET.tostring(root, encoding="unicode")
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<!DOCTYPE score-partwise PUBLIC "-//Recordare//DTD MusicXML 3.1 Partwise//EN" '
        '"http://www.musicxml.org/dtds/partwise.dtd">\n' + body + "\n"
    )


# -- import --------------------------------------------------------------------------


def _read_pitch(el) -> Pitch:
    step = el.findtext("step")
    alter = int(float(el.findtext("alter") or 0))
    octave = int(el.findtext("octave"))
    acc = {1: "#", -1: "b", 0: ""}.get(alter)
    if step is None or acc is None:
        raise ScoreImportError(f"unsupported pitch {step} alter {alter}")
    return Pitch.parse(f"{step}{acc}{octave}")


def _read_lyric(note_el) -> Optional[str]:
    ly = note_el.find("lyric")
    if ly is None:
        return None
    text = ly.findtext("text")
    if text is None:
        return EXTENDER if ly.find("extend") is not None else ""
    if ly.findtext("syllabic") in ("begin", "middle"):
        text += "-"
    return text


def _voice_of(part_name: str, index: int) -> str:
    name = (part_name or "").strip().lower()
    for v in VOICES:
        if name.startswith(v) or name == v[0]:
            return v
    if index < len(VOICES):
        return VOICES[index]
    raise ScoreImportError(f"cannot map part {part_name!r} to a voice")


def _group_measure(measure, voice: str, bar: int, divisions: int):
    """Split one measure of one part into syllable groups of (lyric, notes)."""
    notes = [n for n in measure.findall("note") if n.find("grace") is None and n.find("chord") is None]
    sounding = [n for n in notes if n.find("rest") is None]
    has_lyrics = any(n.find("lyric") is not None for n in sounding)
    groups: list[tuple[Optional[str], list[Note]]] = []
    slur_open = False
    for n in sounding:
        lyric = _read_lyric(n)
        dur = Fraction(int(n.findtext("duration") or 0), divisions)
        p = n.find("pitch")
        if p is None:
            raise ScoreImportError(f"{voice} bar {bar}: note without pitch")
        note = Note(_read_pitch(p), dur)
        slur_types = [s.get("type") for s in n.findall("notations/slur")]
        continued = slur_open or "stop" in slur_types and "start" not in slur_types
        if lyric is not None or not continued:
            if lyric is None and has_lyrics:
                raise ScoreImportError(
                    f"{voice} bar {bar}: note {note.pitch} has neither a lyric nor a slur "
                    "linking it to the previous note"
                )
            groups.append((lyric, [note]))
        else:
            if not groups:
                raise ScoreImportError(f"{voice} bar {bar}: slur continues across the barline")
            groups[-1][1].append(note)
        if "start" in slur_types:
            slur_open = True
        if "stop" in slur_types and "start" not in slur_types:
            slur_open = False
    return groups


def import_musicxml(text: str | bytes, plan: Optional[PiecePlan] = None) -> Score:
    """Read a four-part MusicXML document into a :class:`Score`.

    With ``plan``, the bar count must match and per-bar voicing or slot
    differences are recorded in ``score.anomalies``.
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise ScoreImportError(f"unparseable MusicXML: {exc}") from exc
    if root.tag != "score-partwise":
        raise ScoreImportError(f"expected score-partwise, got {root.tag}")
    try:
        return _import(root, plan)
    except ScoreImportError:
        raise
    except (TintinnabuliError, ValueError, TypeError) as exc:
        raise ScoreImportError(f"invalid MusicXML content: {exc}") from exc


def _import(root, plan: Optional[PiecePlan]) -> Score:
    names = {sp.get("id"): sp.findtext("part-name") for sp in root.findall("part-list/score-part")}
    parts = root.findall("part")
    if len(parts) != 4:
        raise ScoreImportError(f"expected 4 parts, found {len(parts)}")
    voice_parts = {}
    for k, part in enumerate(parts):
        v = _voice_of(names.get(part.get("id"), ""), k)
        if v in voice_parts:
            raise ScoreImportError(f"two parts map to voice {v}")
        voice_parts[v] = part

    n_bars = {len(p.findall("measure")) for p in parts}
    if len(n_bars) != 1:
        raise ScoreImportError(f"parts have different bar counts: {sorted(n_bars)}")
    n_bars = n_bars.pop()
    if plan is not None and n_bars != len(plan):
        raise ScoreImportError(f"document has {n_bars} bars; the plan expects {len(plan)}")

    groups: dict[tuple[str, int], list] = {}
    rehearsal: dict[int, int] = {}
    for v in VOICES:
        divisions = 1
        for bar, m in enumerate(voice_parts[v].findall("measure"), start=1):
            d = m.findtext("attributes/divisions")
            if d:
                divisions = int(d)
            for r in m.findall("direction/direction-type/rehearsal"):
                if r.text and r.text.strip().isdigit():
                    rehearsal.setdefault(bar, int(r.text))
            g = _group_measure(m, v, bar, divisions)
            if g:
                groups[(v, bar)] = g

    anomalies: list[str] = []
    bars, cells = [], []
    section = 0
    for bar in range(1, n_bars + 1):
        active = [v for v in VOICES if (v, bar) in groups]
        if not active:
            raise ScoreImportError(f"bar {bar}: no voice sings")
        counts = {v: len(groups[(v, bar)]) for v in active}
        if len(set(counts.values())) > 1:
            anomalies.append(f"bar {bar}: voices disagree on syllable count {counts}")
        lead = max(active, key=lambda v: (counts[v], -VOICES.index(v)))
        lyrics = tuple(l if l is not None else "" for l, _ in groups[(lead, bar)])
        if bar in rehearsal:
            section = rehearsal[bar]
        elif plan is not None:
            section = plan.bar(bar).section
        elif not rehearsal:
            section = 1 + (bar - 1) // 3
        voicing = "".join(v[0].upper() for v in active)
        bars.append(Bar(bar, max(section, 1), voicing, lyrics))
        for v in active:
            for s, (lyric, notes) in enumerate(groups[(v, bar)]):
                orn = notes[1] if len(notes) > 1 else None
                cells.append(SyllableCell(v, bar, s, lyric, notes[0], orn, tuple(notes[2:])))
                if len(notes) > 2:
                    anomalies.append(f"{v} bar {bar} syllable {s}: {len(notes)}-note melisma")

    new_plan = PiecePlan(tuple(bars))
    if plan is not None:
        for got, want in zip(new_plan, plan):
            if got.voicing != want.voicing:
                anomalies.append(f"bar {got.number}: voicing {got.voicing}, plan expects {want.voicing}")
            if got.slots != want.slots:
                anomalies.append(f"bar {got.number}: {got.slots} syllables, plan expects {want.slots}")
    misc = {f.get("name"): f.text for f in root.findall("identification/miscellaneous/miscellaneous-field")}
    key, triad_text = misc.get("key"), misc.get("triad")
    return Score(
        new_plan, tuple(cells),
        title=root.findtext("movement-title") or root.findtext("work/work-title") or "",
        key=key or "E minor",
        triad=tuple(triad_text.split()) if triad_text else ("E", "G", "B"),
        anomalies=tuple(anomalies),
    )
