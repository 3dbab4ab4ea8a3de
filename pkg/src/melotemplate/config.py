"""Flat ``key = value`` configuration files for template extraction.

Blank lines and ``#`` comments are ignored. Recognised keys::

    key.major_profile = 6.35, 2.23, ...   # 12 weights, tonic first
    key.minor_profile = 6.33, 2.68, ...
    chords.candidates = triads            # triads | all | comma-separated chords
    chords.segment_len = 16
    chords.chord_tone_weight = 1.0
    chords.non_chord_penalty = 0.5
    chords.switch_penalty = 1.0
    cadence.p_auth = 0.3
    cadence.short_dur = 4
    cadence.small_interval = 6
    cadence.large_interval = 8
"""
from __future__ import annotations

from dataclasses import asdict, replace

from .chords import ChordHmmConfig
from .extract import CadenceConfig, ExtractConfig
from .key import KeyProfileConfig
from .theory import ALL_CHORDS, TRIADS, parse_chord

_FLOATS = {"chord_tone_weight", "non_chord_penalty", "switch_penalty", "p_auth"}


def parse_flat(text: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def _candidates(value: str):
    if value == "triads":
        return TRIADS
    if value == "all":
        return ALL_CHORDS
    return tuple(parse_chord(c) for c in value.split(",") if c.strip())


def extract_config_from_flat(values: dict[str, str], base: ExtractConfig | None = None) -> ExtractConfig:
    cfg = base or ExtractConfig()
    sections = {"key": {}, "chords": {}, "cadence": {}}
    for key, value in values.items():
        section, _, name = key.partition(".")
        if section not in sections or not name:
            raise ValueError(f"unknown config key {key!r}")
        if name.endswith("_profile"):
            parsed = tuple(float(v) for v in value.split(","))
        elif name == "candidates":
            name, parsed = "candidate_chords", _candidates(value)
        elif name in _FLOATS:
            parsed = float(value)
        else:
            parsed = int(value)
        sections[section][name] = parsed
    try:
        return ExtractConfig(
            key=replace(cfg.key, **sections["key"]),
            chords=replace(cfg.chords, **sections["chords"]),
            cadence=replace(cfg.cadence, **sections["cadence"]),
        )
    except TypeError as exc:
        raise ValueError(f"unknown config key: {exc}") from None


def load_extract_config(path) -> ExtractConfig:
    with open(path, encoding="utf-8") as fh:
        return extract_config_from_flat(parse_flat(fh.read()))


def extract_config_to_dict(cfg: ExtractConfig) -> dict:
    d = asdict(cfg)
    d["chords"]["candidate_chords"] = [c.token for c in cfg.chords.candidate_chords]
    return d


__all__ = ["parse_flat", "extract_config_from_flat", "load_extract_config",
           "extract_config_to_dict", "KeyProfileConfig", "ChordHmmConfig", "CadenceConfig"]
