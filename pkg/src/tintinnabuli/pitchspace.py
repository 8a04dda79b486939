"""Pitches, scales and scalar pitch spaces.

A scalar pitch space is the set of all gamut pitches that share a pitch class
with some member of a generating scale.  Everything in the package moves
through such spaces: the melodic voices through the E natural minor space,
the tintinnabuli voices through the E minor triad space.

Degrees are zero-based indices into the ascending member list of a space.
"""

from __future__ import annotations

import re
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Iterable, Literal, Sequence

from .errors import MembershipError, PitchRangeError, ValidationError

LETTERS = "CDEFGAB"
NATURAL_PC = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}
SHARP_LETTERS = ("C", "C", "D", "D", "E", "F", "F", "G", "G", "A", "A", "B")

# C0 = 0, so C4 = 48 and A4 = 57.
GAMUT_LOW = 0
GAMUT_HIGH = 96

_PITCH_RE = re.compile(r"^\s*([A-Ga-g])(#|b)?(-?\d)\s*$")


@total_ordering
@dataclass(frozen=True, eq=False)
class Pitch:
    """A pitch in the chromatic gamut C0..C8.

    Identity, hashing and ordering use ``index`` only; ``letter`` merely
    chooses the spelling (``F#3`` vs ``Gb3``) and is never compared.
    """

    index: int
    letter: str = field(default="")

    def __post_init__(self):
        if not isinstance(self.index, int) or isinstance(self.index, bool):
            raise ValidationError(f"pitch index must be an int, got {self.index!r}")
        if not GAMUT_LOW <= self.index <= GAMUT_HIGH:
            raise PitchRangeError(f"pitch index {self.index} outside gamut C0..C8")
        letter = self.letter or SHARP_LETTERS[self.index % 12]
        if letter not in NATURAL_PC:
            raise ValidationError(f"invalid letter {letter!r}")
        if abs(self._alter_for(letter)) > 1:
            raise ValidationError(
                f"letter {letter} cannot spell pitch class {self.index % 12}"
            )
        object.__setattr__(self, "letter", letter)

    def _alter_for(self, letter: str) -> int:
        diff = (self.index - NATURAL_PC[letter]) % 12
        return diff - 12 if diff > 6 else diff

    @classmethod
    def parse(cls, text: str) -> Pitch:
        """Parse scientific pitch notation such as ``"F#3"`` or ``"bb2"``."""
        if isinstance(text, Pitch):
            return text
        m = _PITCH_RE.match(str(text))
        if not m:
            raise ValidationError(f"cannot parse pitch {text!r}")
        letter = m.group(1).upper()
        alter = {"#": 1, "b": -1, None: 0}[m.group(2)]
        octave = int(m.group(3))
        return cls(12 * octave + NATURAL_PC[letter] + alter, letter)

    @property
    def pitch_class(self) -> int:
        return self.index % 12

    @property
    def alter(self) -> int:
        return self._alter_for(self.letter)

    @property
    def octave(self) -> int:
        return (self.index - self.alter - NATURAL_PC[self.letter]) // 12

    @property
    def name(self) -> str:
        return f"{self.letter}{'#' if self.alter > 0 else 'b' if self.alter < 0 else ''}"

    @property
    def spelling(self) -> str:
        return f"{self.name}{self.octave}"

    def __eq__(self, other):
        if isinstance(other, Pitch):
            return self.index == other.index
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, Pitch):
            return self.index < other.index
        return NotImplemented

    def __hash__(self):
        return hash(self.index)

    def __str__(self):
        return self.spelling

    def __repr__(self):
        return f"Pitch({self.spelling!r})"


def pitch(value: str | int | Pitch) -> Pitch:
    """Coerce a pitch string, chromatic index or Pitch into a Pitch."""
    if isinstance(value, Pitch):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Pitch(value)
    return Pitch.parse(value)


def pitches(values: Iterable[str | int | Pitch]) -> tuple[Pitch, ...]:
    return tuple(pitch(v) for v in values)


@dataclass(frozen=True)
class Scale:
    """An ascending set of pitches spanning at most an octave."""

    pitches: tuple[Pitch, ...]

    def __post_init__(self):
        ps = tuple(pitch(p) for p in self.pitches)
        object.__setattr__(self, "pitches", ps)
        if not ps:
            raise ValidationError("a scale needs at least one pitch")
        if any(b <= a for a, b in zip(ps, ps[1:])):
            raise ValidationError("scale pitches must be strictly ascending")
        if ps[-1].index - ps[0].index > 12:
            raise ValidationError("a scale may span at most an octave")
        if len({p.pitch_class for p in ps}) != len(ps):
            raise ValidationError("scale pitch classes must be distinct")

    @classmethod
    def of(cls, names: Iterable[str | Pitch]) -> Scale:
        return cls(pitches(names))

    @property
    def pitch_classes(self) -> frozenset[int]:
        return frozenset(p.pitch_class for p in self.pitches)

    def __len__(self):
        return len(self.pitches)


class PitchSpace:
    """All gamut pitches whose pitch class occurs in ``generator``."""

    def __init__(self, generator: Scale, low: Pitch | None = None, high: Pitch | None = None):
        low = Pitch(GAMUT_LOW) if low is None else pitch(low)
        high = Pitch(GAMUT_HIGH) if high is None else pitch(high)
        if not low < high:
            raise ValidationError("gamut_low must lie below gamut_high")
        self.generator = generator
        self.low = low
        self.high = high
        letters = {p.pitch_class: p.letter for p in generator.pitches}
        self.members: tuple[Pitch, ...] = tuple(
            Pitch(i, letters[i % 12])
            for i in range(low.index, high.index + 1)
            if i % 12 in letters
        )
        if not self.members:
            raise ValidationError("the gamut contains no member of this space")
        self._indices = [p.index for p in self.members]
        self._degrees = {i: d for d, i in enumerate(self._indices)}

    def __repr__(self):
        gen = " ".join(p.spelling for p in self.generator.pitches)
        return f"PitchSpace(<{gen}>, {self.low}..{self.high})"

    def __eq__(self, other):
        if not isinstance(other, PitchSpace):
            return NotImplemented
        return self._indices == other._indices

    def __hash__(self):
        return hash(tuple(self._indices))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, p) -> bool:
        return isinstance(p, Pitch) and p.index in self._degrees

    def spell(self, p: Pitch) -> Pitch:
        """Return ``p`` spelled with this space's generator letters."""
        return self.members[self.degree(p)]

    def degree(self, p: Pitch) -> int:
        try:
            return self._degrees[p.index]
        except (KeyError, AttributeError):
            raise MembershipError(f"{p} is not a member of {self!r}") from None

    def at(self, degree: int) -> Pitch:
        if not 0 <= degree < len(self.members):
            raise PitchRangeError(f"degree {degree} outside {self!r}")
        return self.members[degree]

    def transpose(self, p: Pitch, steps: int) -> Pitch:
        return self.at(self.degree(p) + steps)

    def mirror(self, p: Pitch, center: Pitch) -> Pitch:
        return self.at(2 * self.degree(center) - self.degree(p))

    def neighbor(self, p: Pitch, direction: Literal["up", "down"]) -> Pitch:
        """Nearest member strictly above or below ``p`` (which may be a non-member)."""
        if direction == "up":
            k = bisect_right(self._indices, p.index)
            if k >= len(self.members):
                raise PitchRangeError(f"no member of {self!r} above {p}")
            return self.members[k]
        if direction == "down":
            k = bisect_left(self._indices, p.index) - 1
            if k < 0:
                raise PitchRangeError(f"no member of {self!r} below {p}")
            return self.members[k]
        raise ValidationError(f"direction must be 'up' or 'down', got {direction!r}")


@dataclass(frozen=True)
class Melody:
    """A sequence of pitches that all belong to ``space``."""

    space: PitchSpace
    notes: tuple[Pitch, ...]

    def __post_init__(self):
        notes = tuple(pitch(n) for n in self.notes)
        for n in notes:
            if n not in self.space:
                raise MembershipError(f"melody note {n} is not a member of {self.space!r}")
        object.__setattr__(self, "notes", tuple(self.space.spell(n) for n in notes))

    def __len__(self):
        return len(self.notes)

    def __iter__(self):
        return iter(self.notes)

    def __getitem__(self, i):
        return self.notes[i]


def generate_space(scale: Scale, gamut_low: Pitch | None = None, gamut_high: Pitch | None = None) -> PitchSpace:
    return PitchSpace(scale, gamut_low, gamut_high)


def degree(space: PitchSpace, p: Pitch) -> int:
    return space.degree(p)


def transpose(space: PitchSpace, p: Pitch, d: int) -> Pitch:
    return space.transpose(p, d)


def mirror(space: PitchSpace, p: Pitch, center: Pitch) -> Pitch:
    return space.mirror(p, center)


def neighbor(space: PitchSpace, p: Pitch, direction: Literal["up", "down"]) -> Pitch:
    return space.neighbor(p, direction)


def natural_minor(tonic: str | Pitch) -> Scale:
    """The natural minor scale on ``tonic`` (e.g. ``"E4"``)."""
    root = pitch(tonic)
    steps = (0, 2, 3, 5, 7, 8, 10)
    li = LETTERS.index(root.letter)
    return Scale(tuple(Pitch(root.index + s, LETTERS[(li + k) % 7]) for k, s in enumerate(steps)))


def minor_triad(root: str | Pitch) -> Scale:
    r = pitch(root)
    li = LETTERS.index(r.letter)
    return Scale((r, Pitch(r.index + 3, LETTERS[(li + 2) % 7]), Pitch(r.index + 7, LETTERS[(li + 4) % 7])))


def as_scale(names: Sequence[str | Pitch] | Scale) -> Scale:
    return names if isinstance(names, Scale) else Scale.of(names)
