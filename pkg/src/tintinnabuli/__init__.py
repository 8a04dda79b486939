"""Tintinnabuli processes and an algorithmic reconstruction of Arvo Pärt's *Summa*."""

from .config import SummaConfig
from .errors import (
    AlignmentError,
    AssemblyError,
    ConfigurationError,
    MembershipError,
    PitchRangeError,
    ScoreImportError,
    TintinnabuliError,
    ValidationError,
)
from .pitchspace import Melody, Pitch, PitchSpace, Scale, generate_space, minor_triad, natural_minor
from .plan import PiecePlan, summa_plan
from .processes import (
    OrnamentTrack,
    TintinnabuliProcess,
    mode,
    position_of,
    rotate,
    run_process,
    t_position,
    tail_rotation,
)
from .score import Note, Score, SyllableCell
from .summa import assemble

__version__ = "0.1.0"

__all__ = [
    "AlignmentError", "AssemblyError", "ConfigurationError", "MembershipError",
    "PitchRangeError", "ScoreImportError", "TintinnabuliError", "ValidationError",
    "Melody", "Pitch", "PitchSpace", "Scale", "generate_space", "minor_triad", "natural_minor",
    "PiecePlan", "summa_plan", "OrnamentTrack", "TintinnabuliProcess", "mode", "position_of",
    "rotate", "run_process", "t_position", "tail_rotation", "Note", "Score", "SyllableCell",
    "SummaConfig", "assemble",
]
