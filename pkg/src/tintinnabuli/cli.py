"""Command line front end: ``tintinnabuli generate|evaluate|process|plot``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .config import SummaConfig
from .errors import AlignmentError, ScoreImportError, TintinnabuliError
from .evaluate import evaluate
from .jsonio import export_json, import_json
from .musicxml import export_musicxml, import_musicxml
from .pitchspace import Melody, PitchSpace, Scale, natural_minor, pitch
from .plan import VOICES, summa_plan
from .plot import PlotSpec, render_svg
from .processes import NO_SEED, Bounds, TintinnabuliProcess, run_process
from .score import Score
from .summa import assemble

logger = logging.getLogger("tintinnabuli")

EXIT_OK, EXIT_DIFF, EXIT_IO, EXIT_ALIGN = 0, 1, 2, 3


def _format_for(path: Optional[str], explicit: Optional[str]) -> str:
    if explicit:
        return explicit
    if path and path.lower().endswith(".json"):
        return "json"
    return "musicxml"


def read_score(path: str | Path) -> Score:
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    if p.suffix.lower() == ".json":
        return import_json(text)
    return import_musicxml(text)


def write_score(score: Score, path: Optional[str], fmt: str) -> None:
    doc = export_json(score) if fmt == "json" else export_musicxml(score)
    if path is None or path == "-":
        sys.stdout.write(doc)
    else:
        Path(path).write_text(doc, encoding="utf-8")


def _load_json_arg(value: str):
    """Accept either inline JSON or a path to a JSON file."""
    p = Path(value)
    if not value.lstrip().startswith(("{", "[")) and p.exists():
        value = p.read_text(encoding="utf-8")
    return json.loads(value)


def build_config(args) -> SummaConfig:
    cfg = SummaConfig.load(args.config) if args.config else SummaConfig()
    overrides = {}
    if args.rotation_direction is not None:
        overrides["rotation_direction"] = args.rotation_direction
    if args.bass_transposition is not None:
        overrides["bass_transposition"] = args.bass_transposition
    for flag in ("drop_last_pattern_note", "descending_step_lookahead", "strip_ornamented_exits",
                 "allow_zero_position"):
        if getattr(args, flag):
            overrides[flag] = True
    if args.no_pad_final_section:
        overrides["pad_final_section"] = False
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


def cmd_generate(args) -> int:
    cfg = build_config(args)
    score = assemble(cfg)
    write_score(score, args.output, _format_for(args.output, args.format))
    plan = score.plan
    print(
        f"{len(plan)} bars, {plan.total_slots} syllables ({plan.total_syllables} with text), "
        f"{score.note_count()} notes; flags {json.dumps(cfg.flags(), sort_keys=True)}",
        file=sys.stderr if args.output in (None, "-") else sys.stdout,
    )
    return EXIT_OK


def cmd_evaluate(args) -> int:
    try:
        recon = read_score(args.reconstruction)
        ref = read_score(args.reference)
    except (OSError, ScoreImportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        report = evaluate(recon, ref, without_ending=args.without_ending)
    except AlignmentError as exc:
        print(f"alignment error: {exc}", file=sys.stderr)
        return EXIT_ALIGN
    if args.report:
        try:
            Path(args.report).write_text(report.to_json(), encoding="utf-8")
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
    print(report.table())
    for line in report.unpaired:
        print(f"unpaired: {line}")
    return EXIT_DIFF if report.notes_to_correct > 0 else EXIT_OK


def _space(names, default: Scale) -> PitchSpace:
    return PitchSpace(Scale.of(names) if names else default)


def cmd_process(args) -> int:
    try:
        pdef = _load_json_arg(args.process)
        mdef = _load_json_arg(args.melody)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        if isinstance(mdef, list):
            mdef = {"notes": mdef}
        t_space = _space(pdef.get("triad"), Scale.of(["E4", "G4", "B4"]))
        m_space = _space(mdef.get("scale"), natural_minor("E4"))
        melody = Melody(m_space, tuple(pitch(n) for n in mdef.get("notes", [])))
        pattern = tuple(None if p is None else pitch(p) for p in pdef.get("pattern", ()))
        proc = TintinnabuliProcess(
            pdef["kind"], t_space,
            position=pdef.get("position"),
            bounds=Bounds.from_dict(pdef.get("bounds")),
            pattern=pattern,
            rotation_direction=pdef.get("rotation_direction", "left"),
            lookahead=bool(pdef.get("lookahead", False)),
            allow_zero_position=bool(pdef.get("allow_zero_position", False)),
        )
        seed = NO_SEED
        if args.seed is not None:
            seed = None if args.seed.lower() in ("silent", "none", "null") else pitch(args.seed)
        out = run_process(proc, melody, seed)
    except KeyError as exc:
        print(f"error: process definition lacks {exc}", file=sys.stderr)
        return EXIT_DIFF
    except TintinnabuliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIFF
    print(json.dumps([None if p is None else p.spelling for p in out]))
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        score = read_score(args.score)
    except (OSError, ScoreImportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    voices = tuple(v.strip() for v in args.voices.split(",")) if args.voices else VOICES
    for v in voices:
        if v not in VOICES:
            print(f"error: unknown voice {v!r}", file=sys.stderr)
            return EXIT_DIFF
    spec = PlotSpec(voices=voices, mode=args.mode, section_ticks=not args.no_section_ticks,
                    ornaments=not args.no_ornaments, stack_offset=args.stack_offset)
    try:
        svg = render_svg(score, spec)
    except TintinnabuliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIFF
    Path(args.output).write_text(svg, encoding="utf-8")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tintinnabuli", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="assemble the reconstructed score")
    g.add_argument("--config", help="SummaConfig JSON file")
    g.add_argument("-o", "--output", help="output path (default: stdout)")
    g.add_argument("--format", choices=("musicxml", "json"))
    g.add_argument("--rotation-direction", choices=("left", "right"))
    g.add_argument("--bass-transposition", type=int)
    g.add_argument("--drop-last-pattern-note", action="store_true")
    g.add_argument("--descending-step-lookahead", action="store_true")
    g.add_argument("--strip-ornamented-exits", action="store_true")
    g.add_argument("--allow-zero-position", action="store_true")
    g.add_argument("--no-pad-final-section", action="store_true")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("evaluate", help="compare a reconstruction with a reference score")
    e.add_argument("reconstruction")
    e.add_argument("reference")
    e.add_argument("-o", "--output", "--report", dest="report", help="write the JSON report here")
    e.add_argument("--without-ending", action="store_true", help="leave the final two bars out of the totals")
    e.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("process", help="run a tintinnabuli process over a melody")
    p.add_argument("process", help="process JSON (inline or file)")
    p.add_argument("melody", help="melody JSON (inline or file)")
    p.add_argument("--seed", help="first output pitch, or 'silent'")
    p.set_defaults(func=cmd_process)

    pl = sub.add_parser("plot", help="draw an SVG piano roll of a score")
    pl.add_argument("score")
    pl.add_argument("-o", "--output", required=True)
    pl.add_argument("--voices", help="comma-separated voice names")
    pl.add_argument("--mode", choices=("timeline", "overlay"), default="timeline")
    pl.add_argument("--no-section-ticks", action="store_true")
    pl.add_argument("--no-ornaments", action="store_true")
    pl.add_argument("--stack-offset", type=float, default=0.0)
    pl.set_defaults(func=cmd_plot)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except TintinnabuliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIFF
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
