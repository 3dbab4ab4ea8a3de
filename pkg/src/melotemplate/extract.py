"""Template extraction from a preprocessed melody.

Tonality comes from key profiles, chords from the segment HMM, rhythm from
beat positions, and cadence from duration, onset interval and pitch.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chords import ChordHmmConfig, infer_chords
from .errors import EmptyMelody, LengthMismatch
from .key import KeyProfileConfig, infer_tonality
from .melody import Melody, onset_intervals
from .theory import Chord, tonic_chord
from .tokenizer import Template, Triple


@dataclass(frozen=True)
class CadenceConfig:
    p_auth: float = 0.3
    short_dur: int = 4  # one beat
    small_interval: int = 6  # 1.5 beats
    large_interval: int = 8  # two beats

    def __post_init__(self):
        if not 0.0 <= self.p_auth <= 1.0:
            raise ValueError("p_auth must lie in [0, 1]")
        if min(self.short_dur, self.small_interval, self.large_interval) <= 0:
            raise ValueError("cadence thresholds must be positive")


@dataclass(frozen=True)
class ExtractConfig:
    key: KeyProfileConfig = field(default_factory=KeyProfileConfig)
    chords: ChordHmmConfig = field(default_factory=ChordHmmConfig)
    cadence: CadenceConfig = field(default_factory=CadenceConfig)


def extract_rhythm(melody) -> list[int]:
    return [n.pos // 4 for n in getattr(melody, "notes", melody)]


def is_no_cadence(dur: int, interval: float, cfg: CadenceConfig) -> bool:
    """Short note followed closely by the next one: no phrase ending."""
    return dur < cfg.short_dur and interval < cfg.small_interval


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def extract_cadence(melody, tonality: tuple[int, str], chords, cfg: CadenceConfig | None = None,
                    rng=None) -> list[str]:
    """Label each note ``no``, ``auth`` or ``half``.

    ``tonality`` is ``(root, mode)``. ``rng`` may be a seed or a numpy
    Generator; exactly one draw is consumed per note that reaches the
    probabilistic authentic branch, in note order.
    """
    cfg = cfg or CadenceConfig()
    notes = getattr(melody, "notes", melody)
    if len(chords) != len(notes):
        raise LengthMismatch(f"{len(chords)} chords for {len(notes)} notes")
    gen = _as_rng(0 if rng is None else rng)
    root, mode = tonality
    tonic = tonic_chord(root, mode)
    triad = tonic.pitch_classes
    labels = []
    for note, chord, interval in zip(notes, chords, onset_intervals(notes)):
        pc = note.pitch % 12
        if is_no_cadence(note.dur, interval, cfg):
            labels.append("no")
        elif pc == tonic.root or Chord(*chord) == tonic:
            labels.append("auth")
        elif pc in triad and interval > cfg.large_interval:
            labels.append("auth" if gen.random() < cfg.p_auth else "half")
        else:
            labels.append("half")
    return labels


def extract_template(melody: Melody, cfg: ExtractConfig | None = None, rng=None) -> Template:
    cfg = cfg or ExtractConfig()
    if not melody.notes:
        raise EmptyMelody("cannot extract a template from an empty melody")
    key = infer_tonality(melody, cfg.key)
    chords = infer_chords(melody, cfg.chords)
    rhythms = extract_rhythm(melody)
    cadences = extract_cadence(melody, key, chords, cfg.cadence, rng)
    return Template(key[1], tuple(Triple(*t) for t in zip(chords, rhythms, cadences)))
