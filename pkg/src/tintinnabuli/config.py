"""JSON-serializable configuration of the *Summa* reconstruction."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from functools import cached_property
from pathlib import Path
from typing import Any, Optional

from .errors import ConfigurationError, ValidationError
from .pitchspace import Pitch, PitchSpace, Scale, pitch
from .processes import Bounds

ALPHA = ("E4", "D4", "C4", "B3", "A3", "G3", "F#3", "G3",
         "A3", "B3", "C4", "D4", "E4", "F#4", "G4", "F#4")

ALTO_ORNAMENTS = (None, "G3", None, None, None, "B3", None, "E3",
                  None, None, "B3", None, None, None, None, None)

# No bass ornament pattern is given in text form; every slot is silent.
BASS_ORNAMENTS = (None,) * 16


@dataclass(frozen=True)
class SummaConfig:
    title: str = "Summa"
    m_scale: tuple[str, ...] = ("E4", "F#4", "G4", "A4", "B4", "C5", "D5")
    t_scale: tuple[str, ...] = ("E4", "G4", "B4")
    gamut_low: str = "C0"
    gamut_high: str = "C8"
    alto_pattern: tuple[str, ...] = ALPHA
    drop_last_pattern_note: bool = False
    rotation_direction: str = "left"
    bass_mirror_center: str = "E4"
    bass_transposition: int = -7
    soprano_position: int = 2
    tenor_position: int = 1
    soprano_ornament_bounds: dict = field(default_factory=lambda: {"b": "E4", "B": "E5", "c": None, "C": "E5"})
    tenor_ornament_bounds: dict = field(default_factory=lambda: {"b": "E3", "B": "E4", "c": None, "C": "B3"})
    alto_ornament_pattern: tuple[Optional[str], ...] = ALTO_ORNAMENTS
    bass_ornament_pattern: tuple[Optional[str], ...] = BASS_ORNAMENTS
    descending_step_lookahead: bool = False
    allow_zero_position: bool = False
    strip_ornamented_exits: bool = False
    pad_final_section: bool = True

    def __post_init__(self):
        for name in ("m_scale", "t_scale", "alto_pattern", "alto_ornament_pattern", "bass_ornament_pattern"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.rotation_direction not in ("left", "right"):
            raise ValidationError("rotation_direction must be 'left' or 'right'")
        for name in ("bass_transposition", "soprano_position", "tenor_position"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValidationError(f"{name} must be an integer")
        for name in ("alto_ornament_pattern", "bass_ornament_pattern"):
            if len(getattr(self, name)) != 16:
                raise ValidationError(f"{name} must have 16 entries")
        if len(self.alto_pattern) < 2:
            raise ValidationError("alto_pattern needs at least two notes")
        # parse eagerly so that bad pitch strings fail here
        _ = self.m_space, self.t_space, self.pattern
        for p in self.alto_ornament_pitches + self.bass_ornament_pitches:
            if p is not None and p not in self.t_space:
                raise ValidationError(f"ornament pattern pitch {p} is not a triad pitch")

    # -- derived objects ---------------------------------------------------

    @cached_property
    def m_space(self) -> PitchSpace:
        return PitchSpace(Scale.of(self.m_scale), pitch(self.gamut_low), pitch(self.gamut_high))

    @cached_property
    def t_space(self) -> PitchSpace:
        return PitchSpace(Scale.of(self.t_scale), pitch(self.gamut_low), pitch(self.gamut_high))

    @cached_property
    def pattern(self) -> tuple[Pitch, ...]:
        pat = tuple(self.m_space.spell(pitch(p)) for p in self.alto_pattern)
        return pat[:-1] if self.drop_last_pattern_note else pat

    @property
    def alto_ornament_pitches(self) -> tuple[Optional[Pitch], ...]:
        return tuple(None if p is None else pitch(p) for p in self.alto_ornament_pattern)

    @property
    def bass_ornament_pitches(self) -> tuple[Optional[Pitch], ...]:
        return tuple(None if p is None else pitch(p) for p in self.bass_ornament_pattern)

    @property
    def soprano_bounds(self) -> Bounds:
        return Bounds.from_dict(self.soprano_ornament_bounds)

    @property
    def tenor_bounds(self) -> Bounds:
        return Bounds.from_dict(self.tenor_ornament_bounds)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SummaConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> SummaConfig:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def flags(self) -> dict[str, Any]:
        """The settings that select between readings of the source material."""
        return {
            "rotation_direction": self.rotation_direction,
            "bass_transposition": self.bass_transposition,
            "pattern_length": len(self.pattern),
            "descending_step_lookahead": self.descending_step_lookahead,
            "strip_ornamented_exits": self.strip_ornamented_exits,
            "pad_final_section": self.pad_final_section,
            "bass_ornaments_per_cycle": sum(p is not None for p in self.bass_ornament_pattern),
        }
