"""Key finding by pitch-class profile correlation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyMelody

# Krumhansl-Kessler probe-tone ratings, tonic first.
KK_MAJOR = (6.35, 2.23, 3.48, 2.33, 4.38, 4.09, 2.52, 5.19, 2.39, 3.66, 2.29, 2.88)
KK_MINOR = (6.33, 2.68, 3.52, 5.38, 2.60, 3.53, 2.54, 4.75, 3.98, 2.69, 3.34, 3.17)


@dataclass(frozen=True)
class KeyProfileConfig:
    major_profile: tuple[float, ...] = KK_MAJOR
    minor_profile: tuple[float, ...] = KK_MINOR

    def __post_init__(self):
        for prof in (self.major_profile, self.minor_profile):
            if len(prof) != 12 or any(w < 0 for w in prof):
                raise ValueError("key profiles need 12 nonnegative weights")


def pitch_class_histogram(notes) -> np.ndarray:
    """Duration-weighted pitch-class counts (integer valued)."""
    hist = np.zeros(12, dtype=np.int64)
    for n in notes:
        hist[n.pitch % 12] += n.dur
    return hist


def _pearson(profile: np.ndarray, values: np.ndarray) -> float:
    p = profile - profile.mean()
    v = values - values.mean()
    denom = np.sqrt((p * p).sum() * (v * v).sum())
    if denom == 0.0:
        return 0.0
    return float((p * v).sum() / denom)


def key_scores(hist, cfg: KeyProfileConfig | None = None) -> dict[tuple[int, str], float]:
    """Correlation of every (root, mode) candidate with a pitch-class histogram.

    The histogram is rotated rather than the profile, so transposing the input
    by ``s`` semitones reproduces the very same floating point scores with the
    roots relabelled. That keeps key inference exactly transposition
    equivariant, ties included.
    """
    cfg = cfg or KeyProfileConfig()
    h = np.asarray(hist, dtype=np.float64)
    profiles = {
        "maj": np.asarray(cfg.major_profile, dtype=np.float64),
        "min": np.asarray(cfg.minor_profile, dtype=np.float64),
    }
    scores = {}
    for mode in ("maj", "min"):
        for root in range(12):
            scores[(root, mode)] = _pearson(profiles[mode], np.roll(h, -root))
    return scores


def infer_tonality(melody, cfg: KeyProfileConfig | None = None) -> tuple[int, str]:
    """Return ``(root_pitch_class, mode)``; ties prefer major, then lower root."""
    notes = getattr(melody, "notes", melody)
    if len(notes) == 0:
        raise EmptyMelody("cannot infer the key of an empty melody")
    scores = key_scores(pitch_class_histogram(notes), cfg)
    best, best_score = None, -np.inf
    for mode in ("maj", "min"):
        for root in range(12):
            s = scores[(root, mode)]
            if s > best_score:
                best, best_score = (root, mode), s
    return best
