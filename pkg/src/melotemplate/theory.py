"""Pitch classes, chords and scales.

Only the two normalized tonalities (C major, A minor) appear in templates,
but helpers accept any root so that extraction also works on raw melodies.
"""
from __future__ import annotations

import re
from typing import NamedTuple

PITCH_NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")

QUALITIES = ("maj", "min", "dim", "aug", "maj7", "min7", "half_dim")

QUALITY_INTERVALS = {
    "maj": (0, 4, 7),
    "min": (0, 3, 7),
    "dim": (0, 3, 6),
    "aug": (0, 4, 8),
    "maj7": (0, 4, 7, 11),
    "min7": (0, 3, 7, 10),
    "half_dim": (0, 3, 6, 10),
}

MODES = ("maj", "min")

# Tonic pitch class of each normalized tonality.
NORMALIZED_TONIC = {"maj": 0, "min": 9}

MAJOR_SCALE = (0, 2, 4, 5, 7, 9, 11)
NATURAL_MINOR_SCALE = (0, 2, 3, 5, 7, 8, 10)

_FLATS = {"Db": 1, "Eb": 3, "Gb": 6, "Ab": 8, "Bb": 10, "Cb": 11, "Fb": 4}


class Chord(NamedTuple):
    root: int
    quality: str

    @property
    def token(self) -> str:
        return f"Chord_{PITCH_NAMES[self.root]}_{self.quality}"

    @property
    def pitch_classes(self) -> frozenset[int]:
        return frozenset((self.root + i) % 12 for i in QUALITY_INTERVALS[self.quality])

    def __str__(self) -> str:
        return self.token


ALL_CHORDS = tuple(Chord(r, q) for r in range(12) for q in QUALITIES)
TRIADS = tuple(Chord(r, q) for r in range(12) for q in ("maj", "min"))


def pitch_class_of(name: str) -> int:
    if name in _FLATS:
        return _FLATS[name]
    try:
        return PITCH_NAMES.index(name)
    except ValueError:
        raise ValueError(f"unknown pitch name {name!r}") from None


_CHORD_SUFFIX = {
    "": "maj", "maj": "maj", "M": "maj",
    "m": "min", "min": "min", "-": "min",
    "dim": "dim", "o": "dim",
    "aug": "aug", "+": "aug",
    "maj7": "maj7", "M7": "maj7",
    "m7": "min7", "min7": "min7",
    "m7b5": "half_dim", "ø": "half_dim", "half_dim": "half_dim",
}

_CHORD_RE = re.compile(r"^([A-G](?:#|b)?)(.*)$")


def parse_chord(text: str) -> Chord:
    """Parse ``Am``, ``F#dim``, ``Bm7b5`` or a token such as ``Chord_A_min``."""
    text = text.strip()
    if text.startswith("Chord_"):
        try:
            _, root, quality = text.split("_", 2)
        except ValueError:
            raise ValueError(f"bad chord token {text!r}") from None
        if quality not in QUALITIES:
            raise ValueError(f"bad chord quality in {text!r}")
        return Chord(pitch_class_of(root), quality)
    m = _CHORD_RE.match(text)
    if not m or m.group(2) not in _CHORD_SUFFIX:
        raise ValueError(f"cannot parse chord {text!r}")
    return Chord(pitch_class_of(m.group(1)), _CHORD_SUFFIX[m.group(2)])


def tonic_chord(root: int, mode: str) -> Chord:
    return Chord(root % 12, mode)


def scale_pitch_classes(root: int, mode: str) -> frozenset[int]:
    steps = MAJOR_SCALE if mode == "maj" else NATURAL_MINOR_SCALE
    return frozenset((root + s) % 12 for s in steps)


def key_name(root: int, mode: str) -> str:
    return f"{PITCH_NAMES[root % 12]} {'major' if mode == 'maj' else 'minor'}"
