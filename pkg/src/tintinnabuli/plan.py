"""Bar, section, voicing and lyric architecture of *Summa*."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import ValidationError

VOICES = ("soprano", "alto", "tenor", "bass")
VOICE_LETTERS = {"S": "soprano", "A": "alto", "T": "tenor", "B": "bass"}
VOICINGS = ("SA", "SATB", "TB")
# any non-empty S/A/T/B combination in score order; reference scores may deviate
_SUBSETS = frozenset(
    "".join(c for k, c in enumerate("SATB") if mask >> k & 1) for mask in range(1, 16)
)

#: Lyric placed on slots that carry no text syllable of their own.
EXTENDER = "_"

# One entry per bar: (section, voicing, syllables).  A trailing "-" marks a
# syllable that continues the word.
SUMMA_TEXT: tuple[tuple[int, str, str], ...] = (
    (1, "SA", "Cre- do in u- num de- um,"),
    (1, "SATB", "Pa- trem o- mni- po- ten- tem, fa- cto-"),
    (1, "TB", "rem coe- li et ter- rae, vi-"),
    (2, "TB", "si- bi- li- um o- mni- um,"),
    (2, "SATB", "et in- vi- si- bi- li- um, et in"),
    (2, "SA", "u- num Do- mi- num Je- sum"),
    (3, "SA", "Chri- stum, Fi- li- um De- i"),
    (3, "SATB", "u- ni- ge- ni- tum, et ex Pa- tre"),
    (3, "TB", "na- tum an- te o- mni- a"),
    (4, "TB", "sae- cu- la. De- um de De-"),
    (4, "SATB", "o, lu- men de lu- mi- ne, De- um"),
    (4, "SA", "ve- rum de De- o ve- ro,"),
    (5, "SA", "ge- ni- tum, non fa- ctum, con-"),
    (5, "SATB", "sub- stan- ti- a- lem Pa- tri: per quem"),
    (5, "TB", "o- mni- a fac- ta sunt. Qui"),
    (6, "TB", "prop- ter nos ho- mi- nes, et"),
    (6, "SATB", "pro- pter no- stram sa- lu- tem de- scen-"),
    (6, "SA", "dit de coe- lis. Et in- car-"),
    (7, "SA", "na- tus est de Spi- ri- tu"),
    (7, "SATB", "San- cto ex Ma- ri- a Vir- gi- ne:"),
    (7, "TB", "Et ho- mo fa- ctus est. Cru-"),
    (8, "TB", "ci- fi- xus e- ti- am pro"),
    (8, "SATB", "no- bis sub Pon- ti- o Pi- la- to"),
    (8, "SA", "pas- sus et se- pul- tus est."),
    (9, "SA", "Et re- sur- re- xit ter- ti-"),
    (9, "SATB", "a di- e, se- cun- dum scri- ptu- ras."),
    (9, "TB", "Et a- scen- dit in coe- lum,"),
    (10, "TB", "se- det ad dex- te- ram Pa-"),
    (10, "SATB", "tris. Et i- te- rum ven- tu- rus est"),
    (10, "SA", "cum glo- ri- a, ju- di- ca-"),
    (11, "SA", "re vi- vos et mor- tu- os,"),
    (11, "SATB", "cu- jus re- gni non e- rit fi- nis."),
    (11, "TB", "Et in Spi- ri- tum San- ctum,"),
    (12, "TB", "Do- mi- num, et vi- vi- fi-"),
    (12, "SATB", "can- tem: qui ex Pa- tre Fi- li- o-"),
    (12, "SA", "que pro- ce- dit. Qui cum Pa-"),
    (13, "SA", "tre et Fi- li- o si- mul"),
    (13, "SATB", "ad- o- ra- tur, et con- glo- ri- fi-"),
    (13, "TB", "ca- tur, qui lo- cu- tus est"),
    (14, "TB", "per Pro- phe- tas. Et u- nam"),
    (14, "SATB", "san- ctam ca- tho- li- cam et a- po-"),
    (14, "SA", "sto- li- cam Ec- cle- si- am."),
    (15, "SA", "Con- fi- te- or u- num ba-"),
    (15, "SATB", "pti- sma in re- mis- si- o- nem pec-"),
    (15, "TB", "ca- to- rum. Et ex- spe- cto"),
    (16, "TB", "re- sur- re- cti- o- nem mor-"),
    (16, "SATB", "tu- o- rum, et vi- tam ven- tu- ri"),
    (16, "SA", "sae- cu- li. A-"),
    (16, "SATB", "men"),
)

SECTION_SLOTS = 23


@dataclass(frozen=True)
class Bar:
    number: int
    section: int
    voicing: str
    lyrics: tuple[str, ...]

    def __post_init__(self):
        if not self.voicing or self.voicing not in _SUBSETS:
            raise ValidationError(f"bar {self.number}: unknown voicing {self.voicing!r}")
        if not self.lyrics:
            raise ValidationError(f"bar {self.number} has no syllable slots")

    @property
    def voices(self) -> tuple[str, ...]:
        return tuple(VOICE_LETTERS[c] for c in self.voicing)

    @property
    def slots(self) -> int:
        return len(self.lyrics)

    @property
    def syllables(self) -> int:
        """Number of text syllables; extender slots are not counted."""
        return sum(1 for s in self.lyrics if s != EXTENDER)

    def has(self, voice: str) -> bool:
        return voice in self.voices


@dataclass(frozen=True)
class PiecePlan:
    bars: tuple[Bar, ...]

    def __post_init__(self):
        nums = [b.number for b in self.bars]
        if nums != list(range(1, len(nums) + 1)):
            raise ValidationError("bars must be numbered 1..N without gaps")

    def __iter__(self) -> Iterator[Bar]:
        return iter(self.bars)

    def __len__(self):
        return len(self.bars)

    def bar(self, number: int) -> Bar:
        if not 1 <= number <= len(self.bars):
            raise ValidationError(f"no bar {number} in a {len(self.bars)}-bar plan")
        return self.bars[number - 1]

    @property
    def sections(self) -> list[int]:
        return sorted({b.section for b in self.bars})

    @property
    def total_slots(self) -> int:
        return sum(b.slots for b in self.bars)

    @property
    def total_syllables(self) -> int:
        return sum(b.syllables for b in self.bars)

    def section_slots(self, section: int) -> int:
        return sum(b.slots for b in self.bars if b.section == section)

    def voice_slots(self, voice: str) -> list[tuple[int, int]]:
        """All ``(bar, syllable)`` slots in which ``voice`` sings, in order."""
        return [(b.number, s) for b in self.bars if b.has(voice) for s in range(b.slots)]

    def all_slots(self) -> list[tuple[int, int]]:
        return [(b.number, s) for b in self.bars for s in range(b.slots)]

    def is_exit(self, voice: str, bar_number: int) -> bool:
        """True if ``voice`` sings in this bar but not in the next (or the piece ends)."""
        b = self.bar(bar_number)
        if not b.has(voice):
            return False
        return bar_number == len(self.bars) or not self.bar(bar_number + 1).has(voice)

    def to_rows(self) -> list[dict]:
        return [
            {"number": b.number, "section": b.section, "voicing": b.voicing,
             "syllables": b.syllables, "slots": b.slots, "lyrics": list(b.lyrics)}
            for b in self.bars
        ]


def summa_plan(pad_final_section: bool = True) -> PiecePlan:
    """The 49-bar plan of *Summa*.

    The Credo has 366 syllables but the section grid has room for 16 x 23 =
    368.  With ``pad_final_section`` the last bar gets two extender slots so
    every section, the last included, has 23 slots; without it the plan
    follows the printed syllable counts exactly.
    """
    bars = []
    for number, (section, voicing, text) in enumerate(SUMMA_TEXT, start=1):
        lyrics = tuple(text.split())
        if pad_final_section and number == len(SUMMA_TEXT):
            missing = SECTION_SLOTS - sum(
                len(t.split()) for s, _, t in SUMMA_TEXT if s == section
            )
            lyrics += (EXTENDER,) * missing
        bars.append(Bar(number, section, voicing, lyrics))
    return PiecePlan(tuple(bars))
