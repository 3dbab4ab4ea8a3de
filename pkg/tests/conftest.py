import numpy as np
import pytest

from melotemplate.midi import NoteEvent, write_multitrack
from melotemplate.theory import MAJOR_SCALE, NATURAL_MINOR_SCALE

TPQ = 480
SIXTEENTH = TPQ // 4


def random_song_events(rng: np.random.Generator, n_notes: int = 60):
    """A pop-like song: melody (with some chords and jitter), bass, drums, a short pad.

    The melody is in a random key and mode, so preprocessing has to transpose it.
    """
    root = int(rng.integers(12))
    mode = "maj" if rng.random() < 0.5 else "min"
    steps = MAJOR_SCALE if mode == "maj" else NATURAL_MINOR_SCALE
    tonic = 48 + root + 12 * int(rng.integers(0, 3))
    melody, t = [], 0
    degree = 0
    for i in range(n_notes):
        degree = int(np.clip(degree + rng.integers(-2, 3), -3, 9))
        octave, idx = divmod(degree, 7)
        pitch = tonic + 12 * octave + steps[idx]
        dur16 = int(rng.choice([1, 2, 2, 3, 4, 4, 6, 8, 12]))
        jitter = int(rng.integers(-10, 11))
        onset = max(0, t * SIXTEENTH + jitter)
        melody.append(NoteEvent(onset, onset + dur16 * SIXTEENTH + int(rng.integers(-20, 21)),
                                pitch, 0))
        if rng.random() < 0.15:  # chordal doubling below the melody note
            melody.append(NoteEvent(onset, onset + dur16 * SIXTEENTH, pitch - 4, 0))
        gap = dur16 + int(rng.choice([0, 0, 0, 1, 2, 4]))
        if rng.random() < 0.05:
            gap += 32  # leaves empty bars behind
        t += gap
    end = t * SIXTEENTH
    bass = [NoteEvent(s, s + TPQ * 2, tonic - 24 + int(rng.choice([0, 5, 7])), 1)
            for s in range(0, end, TPQ * 2)]
    drums = [NoteEvent(s, s + SIXTEENTH, 36 + int(rng.integers(0, 10)), 9)
             for s in range(0, end, TPQ // 2)]
    pad = [NoteEvent(s, s + TPQ * 4, tonic + 24, 2) for s in range(0, TPQ * 40, TPQ * 4)]
    return [melody, bass, drums, pad], (root, mode)


def random_song_bytes(seed: int, n_notes: int = 60) -> bytes:
    tracks, _ = random_song_events(np.random.default_rng(seed), n_notes)
    return write_multitrack(tracks, TPQ)


@pytest.fixture(scope="session")
def corpus_bytes():
    return [random_song_bytes(1000 + i, 50 + i % 40) for i in range(60)]


@pytest.fixture(scope="session")
def corpus_melodies(corpus_bytes):
    from melotemplate.melody import preprocess
    from melotemplate.midi import parse_midi

    return [preprocess(parse_midi(b)) for b in corpus_bytes]
