"""Chord inference: per-segment HMM decoded with Viterbi."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import EmptyMelody
from .theory import TRIADS, Chord


@dataclass(frozen=True)
class ChordHmmConfig:
    candidate_chords: tuple[Chord, ...] = TRIADS
    segment_len: int = 16
    chord_tone_weight: float = 1.0
    non_chord_penalty: float = 0.5
    switch_penalty: float = 1.0

    def __post_init__(self):
        if not self.candidate_chords:
            raise ValueError("candidate chord set is empty")
        if self.segment_len < 1:
            raise ValueError("segment_len must be positive")
        if self.chord_tone_weight <= 0 or self.non_chord_penalty <= 0:
            raise ValueError("chord_tone_weight and non_chord_penalty must be positive")
        if self.switch_penalty < 0:
            raise ValueError("switch_penalty must be nonnegative")


def segment_emissions(notes, cfg: ChordHmmConfig) -> np.ndarray:
    """Score matrix ``(n_segments, n_candidates)``.

    Every note adds its overlap with a segment, positively for chord tones and
    scaled by ``-non_chord_penalty`` otherwise.
    """
    seg = cfg.segment_len
    n_seg = max(-(-n.offset // seg) for n in notes)
    member = np.array(
        [[pc in c.pitch_classes for pc in range(12)] for c in cfg.candidate_chords]
    )  # (C, 12)
    per_pc = np.zeros((n_seg, 12))
    for n in notes:
        first, last = n.onset // seg, (n.offset - 1) // seg
        for s in range(first, last + 1):
            overlap = min(n.offset, (s + 1) * seg) - max(n.onset, s * seg)
            per_pc[s, n.pitch % 12] += overlap
    tone = per_pc @ member.T.astype(np.float64)
    other = per_pc.sum(axis=1, keepdims=True) - tone
    return cfg.chord_tone_weight * tone - cfg.non_chord_penalty * other


def path_score(emission: np.ndarray, path, switch_penalty: float) -> float:
    score = 0.0
    for s, c in enumerate(path):
        score += emission[s, c]
        if s and path[s - 1] != c:
            score -= switch_penalty
    return score


def infer_segment_chords(melody, cfg: ChordHmmConfig | None = None) -> list[Chord]:
    cfg = cfg or ChordHmmConfig()
    notes = getattr(melody, "notes", melody)
    if len(notes) == 0:
        raise EmptyMelody("cannot infer chords of an empty melody")
    em = np.ascontiguousarray(segment_emissions(notes, cfg))
    path = kernels.viterbi_lex(em, float(cfg.switch_penalty))
    return [cfg.candidate_chords[i] for i in path]


def infer_chords(melody, cfg: ChordHmmConfig | None = None) -> list[Chord]:
    """One chord per note: the chord of the segment holding the note's onset."""
    cfg = cfg or ChordHmmConfig()
    notes = getattr(melody, "notes", melody)
    per_segment = infer_segment_chords(notes, cfg)
    return [per_segment[n.onset // cfg.segment_len] for n in notes]
