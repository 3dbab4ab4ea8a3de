"""Command line front end.

Exit codes: 0 success, 2 usage error or nothing produced, 3 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import zlib
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from . import __version__
from .align import DEFAULT_LAMBDA_ATTN, alignment_to_json, build_alignment, dump_matrix
from .config import extract_config_to_dict, load_extract_config
from .errors import NoPairs, MelotemplateError
from .extract import ExtractConfig, extract_template
from .generator import SamplerConfig, generate
from .lyrics import ProgressionSpec, iter_lyric_file, lyrics_to_template
from .melody import (
    MIN_MELODY_NOTES,
    Melody,
    melody_from_song,
    preprocess,
    write_midi,
)
from .metrics import evaluate_control, evaluate_similarity
from .midi import read_midi
from .tokenizer import pair_from_json, pair_to_json

log = logging.getLogger("melotemplate")

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 2, 3
MIDI_SUFFIXES = (".mid", ".midi")


def default_seed() -> int:
    return int(os.environ.get("MELOTEMPLATE_SEED", "0"))


def song_seed(seed: int, song_id: str) -> int:
    """Per-song seed, independent of processing order."""
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, zlib.crc32(song_id.encode("utf-8"))])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
                    encoding="utf-8")


def _midi_files(directory: Path) -> list[Path]:
    return sorted(p for p in directory.iterdir() if p.suffix.lower() in MIDI_SUFFIXES)


# --- extract ------------------------------------------------------------------------


def cmd_extract(args) -> int:
    src = Path(args.input)
    if not src.is_dir():
        log.error("input directory %s does not exist", src)
        return EXIT_IO
    cfg = load_extract_config(args.config) if args.config else ExtractConfig()
    if args.p_auth is not None:
        cfg = replace(cfg, cadence=replace(cfg.cadence, p_auth=args.p_auth))
    midi_out = Path(args.midi_out) if args.midi_out else None
    if midi_out:
        midi_out.mkdir(parents=True, exist_ok=True)

    lines, failures = [], []
    for path in _midi_files(src):
        song_id = path.stem
        try:
            melody = preprocess(read_midi(path), args.min_notes, cfg.key)
            template = extract_template(melody, cfg, song_seed(args.seed, song_id))
        except (MelotemplateError, OSError, ValueError) as exc:
            log.warning("%s: %s: %s", path.name, type(exc).__name__, exc)
            failures.append({"file": path.name, "error": type(exc).__name__, "reason": str(exc)})
            continue
        lines.append((song_id, pair_to_json(song_id, template, melody)))
        if midi_out:
            (midi_out / f"{song_id}.mid").write_bytes(write_midi(melody))

    out = Path(args.out)
    out.write_text("".join(line + "\n" for _, line in sorted(lines)), encoding="utf-8")
    _write_json(Path(f"{out}.manifest.json"), {
        "command": "extract",
        "config": {"input": str(src), "seed": args.seed, "min_notes": args.min_notes,
                   "extract": extract_config_to_dict(cfg)},
        "succeeded": sorted(i for i, _ in lines),
        "failures": failures,
    })
    log.info("extracted %d templates, %d failures", len(lines), len(failures))
    return EXIT_OK if lines else EXIT_USAGE


# --- lyric2template -----------------------------------------------------------------


def cmd_lyric2template(args) -> int:
    path = Path(args.lyrics)
    if not path.is_file():
        log.error("lyrics file %s does not exist", path)
        return EXIT_IO
    try:
        spec = ProgressionSpec.parse(args.tonality, args.chords, args.bars_per_chord)
    except (MelotemplateError, ValueError) as exc:
        log.error("bad progression: %s", exc)
        return EXIT_USAGE
    out_lines = []
    try:
        for _, ls in iter_lyric_file(path, args.lang):
            out_lines.append(pair_to_json(ls.id, lyrics_to_template(ls, spec), None))
    except (MelotemplateError, ValueError, KeyError) as exc:
        print(f"{path}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out)
    out.write_text("".join(line + "\n" for line in out_lines), encoding="utf-8")
    _write_json(Path(f"{out}.manifest.json"), {
        "command": "lyric2template",
        "config": {"lyrics": str(path), "lang": args.lang, "tonality": args.tonality,
                   "chords": [c.token for c in spec.chords],
                   "bars_per_chord": args.bars_per_chord},
        "count": len(out_lines),
    })
    return EXIT_OK


# --- generate -----------------------------------------------------------------------


def cmd_generate(args) -> int:
    path = Path(args.templates)
    if not path.is_file():
        log.error("template file %s does not exist", path)
        return EXIT_IO
    base = SamplerConfig(
        temperature=args.temperature, top_k=args.topk, seed=args.seed,
        chord_tone_weight=args.chord_tone_weight, scale_tone_weight=args.scale_tone_weight,
        max_leap=args.max_leap, pitch_range=(args.low, args.high),
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows, failures = [], []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            song_id, template, _ = pair_from_json(line)
            if template is None:
                raise ValueError("line has no template")
            seed = song_seed(args.seed, song_id)
            melody = generate(template, replace(base, seed=seed))
        except (MelotemplateError, ValueError, KeyError) as exc:
            log.warning("%s:%d skipped: %s: %s", path.name, lineno, type(exc).__name__, exc)
            failures.append({"line": lineno, "error": type(exc).__name__, "reason": str(exc)})
            continue
        fname = f"{song_id}.mid"
        (out / fname).write_bytes(write_midi(melody))
        rows.append({"id": song_id, "file": fname, "seed": seed, "notes": len(melody)})
    rows.sort(key=lambda r: r["id"])
    with open(out / "manifest.jsonl", "w", encoding="utf-8") as fh:
        for r in rows:
            fh.write(json.dumps(r, sort_keys=True) + "\n")
    _write_json(out / "manifest.config.json", {
        "command": "generate",
        "config": {"templates": str(path), **asdict(base)},
        "failures": failures,
    })
    return EXIT_OK if rows else EXIT_USAGE


# --- evaluation ---------------------------------------------------------------------


def load_melodies(source: Path) -> dict[str, Melody]:
    """Melodies keyed by id from a MIDI directory or a melody/pair JSONL file."""
    if source.is_dir():
        out = {}
        for p in _midi_files(source):
            try:
                out[p.stem] = melody_from_song(read_midi(p))
            except MelotemplateError as exc:
                log.warning("%s: %s", p.name, exc)
        return out
    text = source.read_text(encoding="utf-8")
    out = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        if "notes" in obj:
            out[str(obj["id"])] = Melody(tuple(tuple(n) for n in obj["notes"]))
        else:
            song_id, _, melody = pair_from_json(line)
            if melody is not None:
                out[song_id] = melody
    return out


def _emit_report(report: dict, out: str | None, csv_path: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    if csv_path and report.get("per_song"):
        keys = list(report["per_song"][0])
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(",".join(keys) + "\n")
            for row in report["per_song"]:
                fh.write(",".join(str(row[k]) for k in keys) + "\n")


def cmd_eval(args) -> int:
    hyp, ref = Path(args.hyp), Path(args.ref)
    if not hyp.exists() or not ref.exists():
        log.error("missing input %s", hyp if not hyp.exists() else ref)
        return EXIT_IO
    try:
        report = evaluate_similarity(load_melodies(hyp), load_melodies(ref))
    except NoPairs as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    _emit_report(report.to_dict(), args.out, args.csv)
    if report.unpaired:
        log.error("unpaired ids: %s", ", ".join(report.unpaired))
        return EXIT_USAGE
    return EXIT_OK


def cmd_eval_control(args) -> int:
    tpath = Path(args.templates)
    if not tpath.is_file():
        log.error("template file %s does not exist", tpath)
        return EXIT_IO
    templates, embedded = {}, {}
    for line in tpath.read_text(encoding="utf-8").splitlines():
        if line.strip():
            song_id, template, melody = pair_from_json(line)
            if template is not None:
                templates[song_id] = template
            if melody is not None:
                embedded[song_id] = melody
    if args.midi:
        mdir = Path(args.midi)
        if not mdir.exists():
            log.error("missing input %s", mdir)
            return EXIT_IO
        melodies = load_melodies(mdir)
    else:
        melodies = embedded
    cfg = ExtractConfig().cadence
    if args.config:
        cfg = load_extract_config(args.config).cadence
    try:
        report = evaluate_control(melodies, templates, cfg)
    except (NoPairs, MelotemplateError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    _emit_report(report.to_dict(), args.out, args.csv)
    if report.unpaired:
        log.error("unpaired ids: %s", ", ".join(report.unpaired))
        return EXIT_USAGE
    return EXIT_OK


# --- align --------------------------------------------------------------------------


def cmd_align(args) -> int:
    if args.notes < 1:
        log.error("--notes must be at least 1")
        return EXIT_USAGE
    align = build_alignment(args.notes)
    _write_json(Path(args.out), alignment_to_json(align, args.lambda_attn))
    if args.dump:
        Path(args.dump).write_text(dump_matrix(align.w), encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="melotemplate", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("extract", help="MIDI directory -> template/melody pairs (JSONL)")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--seed", type=int, default=default_seed())
    e.add_argument("--p-auth", type=float, default=None)
    e.add_argument("--config", help="flat key=value extraction config")
    e.add_argument("--min-notes", type=int, default=MIN_MELODY_NOTES)
    e.add_argument("--midi-out", help="also write the normalized melodies as MIDI")
    e.set_defaults(func=cmd_extract)

    l2t = sub.add_parser("lyric2template", help="lyrics -> templates (JSONL)")
    l2t.add_argument("--lyrics", required=True)
    l2t.add_argument("--lang", choices=("en", "zh"), required=True)
    l2t.add_argument("--tonality", choices=("maj", "min"), default="maj")
    l2t.add_argument("--chords", default="C,G,Am,F")
    l2t.add_argument("--bars-per-chord", type=int, default=1)
    l2t.add_argument("--out", required=True)
    l2t.set_defaults(func=cmd_lyric2template)

    g = sub.add_parser("generate", help="templates -> MIDI melodies")
    g.add_argument("--templates", required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--seed", type=int, default=default_seed())
    g.add_argument("--temperature", type=float, default=0.5)
    g.add_argument("--topk", type=int, default=10)
    g.add_argument("--chord-tone-weight", type=float, default=4.0)
    g.add_argument("--scale-tone-weight", type=float, default=1.0)
    g.add_argument("--max-leap", type=int, default=12)
    g.add_argument("--low", type=int, default=55)
    g.add_argument("--high", type=int, default=79)
    g.set_defaults(func=cmd_generate)

    ev = sub.add_parser("eval", help="PD/DD/MD between two corpora")
    ev.add_argument("--hyp", required=True)
    ev.add_argument("--ref", required=True)
    ev.add_argument("--out", default="eval_report.json")
    ev.add_argument("--csv")
    ev.set_defaults(func=cmd_eval)

    ec = sub.add_parser("eval-control", help="TA/CA/RA/AA of melodies against templates")
    ec.add_argument("--midi", help="MIDI directory; defaults to melodies embedded in --templates")
    ec.add_argument("--templates", required=True)
    ec.add_argument("--config")
    ec.add_argument("--out", default="control_report.json")
    ec.add_argument("--csv")
    ec.set_defaults(func=cmd_eval_control)

    a = sub.add_parser("align", help="alignment matrices for an N-note pair")
    a.add_argument("--notes", type=int, required=True)
    a.add_argument("--out", required=True)
    a.add_argument("--lambda", dest="lambda_attn", type=float, default=DEFAULT_LAMBDA_ATTN)
    a.add_argument("--dump", help="also write w as a plain-text matrix")
    a.set_defaults(func=cmd_align)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
