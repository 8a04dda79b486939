"""Tintinnabuli positions, processes and sequence utilities.

A tintinnabuli process turns a melody ``m_1..m_K`` into a second line
``t_1..t_K`` where each ``t_i`` may look at the whole melody but only at the
*earlier* entries of its own output.  The five process kinds implemented here
are all expressed through that one contract in :func:`run_process`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Sequence, TypeVar

from .errors import ConfigurationError, MembershipError, ValidationError
from .pitchspace import Melody, Pitch, PitchSpace, pitch

T = TypeVar("T")

Direction = Literal["left", "right"]
Kind = Literal["constant", "alternate", "step", "repeat-previous", "tail-rotated-pattern"]
KINDS: tuple[str, ...] = ("constant", "alternate", "step", "repeat-previous", "tail-rotated-pattern")
PITCH_KINDS = frozenset({"constant", "alternate", "step"})
ORNAMENT_KINDS = frozenset({"repeat-previous", "tail-rotated-pattern"})


class _NoSeed:
    def __repr__(self):
        return "NO_SEED"


#: Passed as ``t1`` to :func:`run_process` to request the kind's default seed.
NO_SEED = _NoSeed()


# -- positions ----------------------------------------------------------------


def t_position(t_space: PitchSpace, n: Pitch, p: int) -> Pitch:
    """The tintinnabuli pitch in position ``p`` relative to ``n``.

    ``p > 0`` counts members of ``t_space`` strictly above ``n``, ``p < 0``
    strictly below, and ``p == 0`` returns ``n`` unchanged.
    """
    out = n
    direction = "up" if p > 0 else "down"
    for _ in range(abs(p)):
        out = t_space.neighbor(out, direction)
    return out


def position_of(t_space: PitchSpace, m: Pitch, t: Pitch) -> int:
    """Inverse of :func:`t_position` for a fixed reference pitch ``m``."""
    if t == m:
        return 0
    if t not in t_space:
        raise MembershipError(f"{t} is not a member of {t_space!r}; it has no position")
    d = t_space.degree(t)
    if t > m:
        # members strictly above m, up to and including t
        first_above = t_space.degree(t_space.neighbor(m, "up"))
        return d - first_above + 1
    first_below = t_space.degree(t_space.neighbor(m, "down"))
    return -(first_below - d + 1)


# -- sequence utilities ----------------------------------------------------------


def rotate(seq: Sequence[T], d: int, direction: Direction = "left") -> list[T]:
    """Cyclic rotation by ``d``; ``left`` moves element ``d`` to the front."""
    items = list(seq)
    if not items:
        raise ValidationError("cannot rotate an empty sequence")
    if direction not in ("left", "right"):
        raise ValidationError(f"rotation direction must be 'left' or 'right', got {direction!r}")
    k = d % len(items)
    if direction == "right":
        k = (-k) % len(items)
    return items[k:] + items[:k]


def tail_rotation(seq: Sequence[T], d: int, direction: Direction = "left") -> list[T]:
    """Keep the head of ``seq`` in place and rotate everything after it."""
    items = list(seq)
    if len(items) < 2:
        raise ValidationError("tail rotation needs a sequence of length >= 2")
    return [items[0], *rotate(items[1:], d, direction)]


def mode(space: PitchSpace, kind: int, length: int, center: Pitch) -> Melody:
    """One of the four stepwise melodic modes around ``center``.

    1: ascend from the center, 2: descend from it,
    3: descend towards it, 4: ascend towards it.
    """
    if length < 1:
        raise ValidationError("mode length must be at least 1")
    c = space.degree(center)
    if kind == 1:
        degs = range(c, c + length)
    elif kind == 2:
        degs = range(c, c - length, -1)
    elif kind == 3:
        degs = range(c + length - 1, c - 1, -1)
    elif kind == 4:
        degs = range(c - length + 1, c + 1)
    else:
        raise ValidationError(f"mode kind must be 1, 2, 3 or 4, got {kind!r}")
    return Melody(space, tuple(space.at(d) for d in degs))


def glue(*melodies: Melody | Sequence[Pitch]) -> list[Pitch]:
    out: list[Pitch] = []
    for m in melodies:
        out.extend(m)
    return out


# -- rules -------------------------------------------------------------------------


def constant_rule(t_space: PitchSpace, p: int) -> Callable[[Pitch], Pitch]:
    def rule(m_i: Pitch) -> Pitch:
        return t_position(t_space, m_i, p)

    return rule


def alternate_rule(t_space: PitchSpace, m_i: Pitch, m_prev: Pitch, t_prev: Pitch) -> Pitch:
    p_prev = position_of(t_space, m_prev, t_prev)
    return t_position(t_space, m_i, -p_prev)


def step_rule(t_space: PitchSpace, p: int) -> Callable[[Pitch, Pitch], Pitch]:
    """Move one triad step from ``t_prev``, staying at least in position ``p``.

    For ``p >= 0`` the rule prefers stepping down and only steps up when the
    lower neighbor would fall below ``T_p(reference)``; ties go down.  For
    ``p < 0`` everything is mirrored.
    """

    def rule(reference: Pitch, t_prev: Pitch) -> Pitch:
        bound = t_position(t_space, reference, p)
        if p >= 0:
            below = t_space.neighbor(t_prev, "down")
            return below if below >= bound else t_space.neighbor(t_prev, "up")
        above = t_space.neighbor(t_prev, "up")
        return above if above <= bound else t_space.neighbor(t_prev, "down")

    return rule


@dataclass(frozen=True)
class Bounds:
    """Optional inclusive bounds of the repeat-previous ornament rule.

    ``b..B`` constrains the previous melody note, ``c..C`` the next one;
    ``None`` leaves that side unbounded.
    """

    b: Optional[Pitch] = None
    B: Optional[Pitch] = None
    c: Optional[Pitch] = None
    C: Optional[Pitch] = None

    def __post_init__(self):
        for name in ("b", "B", "c", "C"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, pitch(v))

    @classmethod
    def from_dict(cls, d: dict | None) -> Bounds:
        d = d or {}
        unknown = set(d) - {"b", "B", "c", "C"}
        if unknown:
            raise ValidationError(f"unknown bound keys: {sorted(unknown)}")
        return cls(**{k: (None if v is None else pitch(v)) for k, v in d.items()})

    def to_dict(self) -> dict:
        return {k: (None if getattr(self, k) is None else getattr(self, k).spelling) for k in ("b", "B", "c", "C")}


def repeat_previous_rule(bounds: Bounds) -> Callable[[Pitch, Pitch], Optional[Pitch]]:
    def rule(m_prev: Pitch, m_next: Pitch) -> Optional[Pitch]:
        if m_next == m_prev:
            return None
        if bounds.b is not None and m_prev < bounds.b:
            return None
        if bounds.B is not None and m_prev > bounds.B:
            return None
        if bounds.c is not None and m_next < bounds.c:
            return None
        if bounds.C is not None and m_next > bounds.C:
            return None
        return m_prev

    return rule


def tail_rotated_pattern_rule(
    x: Sequence[Optional[Pitch]], direction: Direction = "left"
) -> Callable[[int], Optional[Pitch]]:
    """Cycle through ``x``, tail-rotating it once more on every pass."""
    if not x:
        raise ValidationError("pattern must not be empty")
    pattern = list(x)
    n = len(pattern)

    def rule(i: int) -> Optional[Pitch]:
        if n == 1:
            return pattern[0]
        return tail_rotation(pattern, i // n, direction)[i % n]

    return rule


# -- processes ---------------------------------------------------------------------


@dataclass(frozen=True)
class OrnamentTrack:
    """Per-note ornaments; ``None`` marks a note without ornament."""

    entries: tuple[Optional[Pitch], ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def count(self) -> int:
        return sum(e is not None for e in self.entries)


@dataclass(frozen=True)
class TintinnabuliProcess:
    kind: str
    t_space: PitchSpace
    position: Optional[int] = None
    bounds: Bounds = field(default_factory=Bounds)
    pattern: tuple[Optional[Pitch], ...] = ()
    rotation_direction: Direction = "left"
    # reference m_{i+1} instead of m_i in the descending step rule
    lookahead: bool = False
    allow_zero_position: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown process kind {self.kind!r}; expected one of {KINDS}")
        if self.kind in ("constant", "step", "alternate"):
            if self.position is None:
                raise ConfigurationError(f"{self.kind} process needs a position")
            if self.kind != "alternate" and self.position == 0 and not self.allow_zero_position:
                raise ValidationError(f"position 0 is not allowed for a {self.kind} process")
        if self.kind == "tail-rotated-pattern":
            pat = tuple(None if p is None else pitch(p) for p in self.pattern)
            if not pat:
                raise ValidationError("tail-rotated-pattern needs a non-empty pattern")
            for p in pat:
                if p is not None and p not in self.t_space:
                    raise MembershipError(f"pattern pitch {p} is not in {self.t_space!r}")
            object.__setattr__(self, "pattern", tuple(None if p is None else self.t_space.spell(p) for p in pat))

    @property
    def yields_ornaments(self) -> bool:
        return self.kind in ORNAMENT_KINDS

    def default_seed(self, melody: Sequence[Pitch]) -> Optional[Pitch]:
        if self.kind in PITCH_KINDS:
            return t_position(self.t_space, melody[0], self.position)
        if self.kind == "tail-rotated-pattern":
            return self.pattern[0]
        return None

    def __call__(self, melody, t1=NO_SEED):
        return run_process(self, melody, t1)


def run_process(proc: TintinnabuliProcess, melody: Melody | Sequence[Pitch], t1=NO_SEED):
    """Run ``proc`` over ``melody``.

    ``t1`` fixes the first output entry; leave it as :data:`NO_SEED` for the
    kind's default (``T_p(m_1)`` for pitch kinds, silence or the pattern head
    for ornament kinds).  Returns a :class:`Melody` over ``proc.t_space`` for
    pitch kinds and an :class:`OrnamentTrack` otherwise.
    """
    m = [pitch(n) for n in melody]
    if not m:
        raise ValidationError("cannot run a process over an empty melody")
    ts = proc.t_space
    if t1 is NO_SEED:
        seed = proc.default_seed(m)
    elif t1 is None:
        if proc.kind in PITCH_KINDS:
            raise ConfigurationError(f"a {proc.kind} process cannot start on silence")
        seed = None
    else:
        seed = pitch(t1)
        if seed not in ts:
            raise MembershipError(f"seed {seed} is not a member of {ts!r}")

    out: list[Optional[Pitch]] = [seed]
    K = len(m)
    if proc.kind == "constant":
        rule = constant_rule(ts, proc.position)
        out += [rule(m[i]) for i in range(1, K)]
    elif proc.kind == "alternate":
        for i in range(1, K):
            out.append(alternate_rule(ts, m[i], m[i - 1], out[i - 1]))
    elif proc.kind == "step":
        rule = step_rule(ts, proc.position)
        for i in range(1, K):
            ref = m[i]
            if proc.lookahead and proc.position < 0 and i + 1 < K:
                ref = m[i + 1]
            out.append(rule(ref, out[i - 1]))
    elif proc.kind == "repeat-previous":
        rule = repeat_previous_rule(proc.bounds)
        out += [rule(m[i - 1], m[i + 1]) for i in range(1, K - 1)]
        if K > 1:
            out.append(None)
    else:
        rule = tail_rotated_pattern_rule(proc.pattern, proc.rotation_direction)
        out += [rule(i) for i in range(1, K)]

    if proc.yields_ornaments:
        for o in out:
            if o is not None and o not in ts:
                raise MembershipError(f"ornament {o} is not a member of {ts!r}")
        return OrnamentTrack(tuple(None if o is None else ts.spell(o) for o in out))
    return Melody(ts, tuple(out))
