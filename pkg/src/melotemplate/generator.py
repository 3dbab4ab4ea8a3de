"""Rule-based template-to-melody sampler.

Onsets follow the rhythm tokens, durations follow the cadences and pitches
are drawn from the tonality's scale with chord tones favoured. Only pitch
sampling is random.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AllZeroWeights, BarOverflow, EmptyCandidateSet, LengthMismatch
from .melody import MAX_BAR, Melody, Note
from .theory import NORMALIZED_TONIC, scale_pitch_classes
from .tokenizer import Template

MIN_GAP = {"no": 1, "half": 6, "auth": 8}
DUR_CAP = {"no": 3, "half": 8, "auth": 12}
LAST_INTERVAL = 16


@dataclass(frozen=True)
class SamplerConfig:
    temperature: float = 0.5
    top_k: int = 10
    chord_tone_weight: float = 4.0
    scale_tone_weight: float = 1.0
    max_leap: int = 12
    pitch_range: tuple[int, int] = (55, 79)
    seed: int = 0

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        if self.top_k < 1:
            raise ValueError("top_k must be at least 1")
        low, high = self.pitch_range
        if not 0 <= low < high <= 127:
            raise ValueError(f"bad pitch range {self.pitch_range}")
        if self.chord_tone_weight <= 0 or self.scale_tone_weight <= 0:
            raise ValueError("tone weights must be positive")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def sample_categorical(weights, cfg: SamplerConfig, rng: np.random.Generator | None = None) -> int:
    """Top-k filter, sharpen by ``1/temperature``, draw one index."""
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or np.any(w < 0):
        raise ValueError("weights must be a 1-d nonnegative vector")
    if not np.any(w > 0):
        raise AllZeroWeights("no positive weight to sample from")
    rng = cfg.rng() if rng is None else rng
    keep = np.argsort(-w, kind="stable")[: cfg.top_k]
    probs = np.zeros_like(w)
    probs[keep] = w[keep] ** (1.0 / cfg.temperature)
    probs /= probs.sum()
    cdf = np.cumsum(probs)
    idx = min(int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right")), len(w) - 1)
    # float round-off can land on a trailing zero-probability slot
    while probs[idx] == 0:
        idx -= 1
    return idx


def _next_onset(prev: int, rhythm: int, min_gap: int) -> int:
    o = prev + max(1, min_gap)
    while not ((o % 16) // 4 == rhythm and o % 4 in (0, 2)):
        o += 1
    return o


def schedule_onsets(template: Template) -> list[int]:
    """Place each note on its rhythm token's beat, on the beat or half-beat.

    The gap after a note must reach ``MIN_GAP`` of its cadence, which leaves
    room for the pause that half and authentic cadences imply.
    """
    triples = template.triples
    if not triples:
        return []
    onsets = [4 * triples[0].rhythm]
    for prev, cur in zip(triples, triples[1:]):
        onsets.append(_next_onset(onsets[-1], cur.rhythm, MIN_GAP[prev.cadence]))
    return onsets


def assign_durations(onsets, cadences) -> list[int]:
    if len(onsets) != len(cadences):
        raise LengthMismatch(f"{len(onsets)} onsets for {len(cadences)} cadences")
    intervals = [b - a for a, b in zip(onsets, onsets[1:])] + [LAST_INTERVAL]
    durs = []
    for interval, cad in zip(intervals, cadences):
        if cad == "no":
            durs.append(min(interval, DUR_CAP["no"]))
        else:
            durs.append(max(4, min(interval - 1, DUR_CAP[cad])))
    return durs


def candidate_pitches(tonality: str, cfg: SamplerConfig) -> list[int]:
    scale = scale_pitch_classes(NORMALIZED_TONIC[tonality], tonality)
    low, high = cfg.pitch_range
    return [p for p in range(low, high + 1) if p % 12 in scale]


def pitch_weights(candidates, chord, prev_pitch, cfg: SamplerConfig) -> np.ndarray:
    tones = chord.pitch_classes
    w = np.array([cfg.chord_tone_weight if p % 12 in tones else cfg.scale_tone_weight
                  for p in candidates])
    if prev_pitch is not None:
        w[np.abs(np.asarray(candidates) - prev_pitch) > cfg.max_leap] = 0.0
    return w


def sample_pitches(template: Template, onsets, cfg: SamplerConfig,
                   rng: np.random.Generator | None = None) -> list[int]:
    if len(onsets) != len(template):
        raise LengthMismatch(f"{len(onsets)} onsets for {len(template)} template notes")
    rng = cfg.rng() if rng is None else rng
    base = candidate_pitches(template.tonality, cfg)
    tonic = NORMALIZED_TONIC[template.tonality]
    pitches: list[int] = []
    last = len(template) - 1
    for i, triple in enumerate(template.triples):
        cands = base
        if i == last and triple.cadence == "auth":
            cands = [p for p in base if p % 12 == tonic]
        if not cands:
            raise EmptyCandidateSet("pitch range holds no admissible pitch")
        w = pitch_weights(cands, triple.chord, pitches[-1] if pitches else None, cfg)
        if not np.any(w > 0):
            raise EmptyCandidateSet(f"no pitch within {cfg.max_leap} semitones of {pitches[-1]}")
        pitches.append(cands[sample_categorical(w, cfg, rng)])
    return pitches


def generate(template: Template, cfg: SamplerConfig | None = None) -> Melody:
    cfg = cfg or SamplerConfig()
    onsets = schedule_onsets(template)
    if onsets and onsets[-1] // 16 > MAX_BAR:
        raise BarOverflow(f"template needs {onsets[-1] // 16 + 1} bars")
    durs = assign_durations(onsets, template.cadences)
    pitches = sample_pitches(template, onsets, cfg, cfg.rng())
    return Melody(tuple(Note.at(o, p, d) for o, p, d in zip(onsets, pitches, durs)))
