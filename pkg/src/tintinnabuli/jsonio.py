"""Canonical JSON form of a :class:`~tintinnabuli.score.Score`.

Pitches are written in scientific notation, durations as ``"n/d"`` strings.
The schema lives next to this module in ``score.schema.json``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any, Optional

import jsonschema

from .errors import ScoreImportError, TintinnabuliError
from .pitchspace import Pitch
from .plan import VOICES, Bar, PiecePlan
from .score import Note, Score, SyllableCell


@lru_cache(maxsize=None)
def score_schema() -> dict:
    text = resources.files("tintinnabuli").joinpath("score.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _inline_refs(node, defs):
    # the schema is not recursive, so local references can be expanded once up front
    if isinstance(node, dict):
        ref = node.get("$ref", "")
        if ref.startswith("#/$defs/"):
            return _inline_refs(defs[ref[len("#/$defs/"):]], defs)
        return {k: _inline_refs(v, defs) for k, v in node.items() if k != "$defs"}
    if isinstance(node, list):
        return [_inline_refs(v, defs) for v in node]
    return node


@lru_cache(maxsize=None)
def _validator():
    schema = score_schema()
    cls = jsonschema.validators.validator_for(schema)
    cls.check_schema(schema)
    return cls(_inline_refs(schema, schema.get("$defs", {})))


def format_duration(d: Fraction) -> str:
    d = Fraction(d)
    return f"{d.numerator}/{d.denominator}"


def parse_duration(text: str) -> Fraction:
    try:
        n, d = text.split("/")
        return Fraction(int(n), int(d))
    except (ValueError, ZeroDivisionError) as exc:
        raise ScoreImportError(f"bad duration {text!r}; expected 'n/d'") from exc


def _note(n: Optional[Note]) -> Optional[dict]:
    if n is None:
        return None
    return {"pitch": n.pitch.spelling, "duration": format_duration(n.duration)}


def _cell(c: SyllableCell) -> dict:
    return {
        "bar": c.bar,
        "syllable": c.syllable,
        "lyric": c.lyric,
        "main": _note(c.main),
        "ornament": _note(c.ornament),
        "overflow": [_note(n) for n in c.overflow],
        "slur": c.slur,
    }


def score_to_dict(score: Score) -> dict[str, Any]:
    bars = []
    for b in score.plan:
        bars.append({
            "number": b.number,
            "section": b.section,
            "voicing": b.voicing,
            "syllables": b.syllables,
            "slots": b.slots,
            "lyrics": list(b.lyrics),
            "length": format_duration(score.bar_length(b.number)),
        })
    return {
        "format": "tintinnabuli-score",
        "version": 1,
        "title": score.title,
        "key": score.key,
        "triad": list(score.triad),
        "bars": bars,
        "parts": {v: [_cell(c) for c in score.part(v)] for v in VOICES},
    }


def export_json(score: Score) -> str:
    return json.dumps(score_to_dict(score), indent=2, ensure_ascii=False) + "\n"


def _read_note(d: Optional[dict]) -> Optional[Note]:
    if d is None:
        return None
    return Note(Pitch.parse(d["pitch"]), parse_duration(d["duration"]))


def score_from_dict(data: dict[str, Any]) -> Score:
    exc = next(_validator().iter_errors(data), None)
    if exc is not None:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise ScoreImportError(f"score JSON violates schema at '{path}': {exc.message}")
    try:
        bars = tuple(Bar(b["number"], b["section"], b["voicing"], tuple(b["lyrics"])) for b in data["bars"])
        for raw, bar in zip(data["bars"], bars):
            if raw["slots"] != bar.slots or raw["syllables"] != bar.syllables:
                raise ScoreImportError(f"bar {bar.number}: slot/syllable counts disagree with its lyrics")
        cells = []
        for voice, items in data["parts"].items():
            for c in items:
                orn = _read_note(c["ornament"])
                if c["slur"] != (orn is not None):
                    raise ScoreImportError(f"{voice} bar {c['bar']}: slur flag must match ornament presence")
                cells.append(SyllableCell(
                    voice, c["bar"], c["syllable"], c["lyric"], _read_note(c["main"]), orn,
                    tuple(_read_note(n) for n in c["overflow"]),
                ))
        return Score(PiecePlan(bars), tuple(cells), title=data["title"], key=data["key"],
                     triad=tuple(data["triad"]))
    except ScoreImportError:
        raise
    except (TintinnabuliError, ValueError, ZeroDivisionError) as exc:
        raise ScoreImportError(f"invalid score JSON: {exc}") from exc


def import_json(text: str) -> Score:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScoreImportError(f"not valid JSON: {exc}") from exc
    return score_from_dict(data)
