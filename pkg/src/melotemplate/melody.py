"""Canonical melody model and the MIDI-to-melody preprocessing chain.

A melody lives on a sixteenth-note grid in 4/4: ``onset = 16 * bar + pos``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import (
    BarOverflow,
    EmptyMelody,
    NoEligibleTrack,
    NotFourFour,
    OutOfVocab,
)
from .midi import (
    DRUM_CHANNEL,
    WRITE_TICKS_PER_SIXTEENTH,
    MidiSong,
    NoteEvent,
    write_midi_events,
)

MAX_BAR = 255
MIN_MELODY_NOTES = 50
VOCAL_MEAN_LOW = 60
VOCAL_MEAN_HIGH = 72  # exclusive


class Note(NamedTuple):
    bar: int
    pos: int
    pitch: int
    dur: int

    @property
    def onset(self) -> int:
        return 16 * self.bar + self.pos

    @property
    def offset(self) -> int:
        return self.onset + self.dur

    @classmethod
    def at(cls, onset: int, pitch: int, dur: int) -> "Note":
        return cls(onset // 16, onset % 16, pitch, dur)


@dataclass(frozen=True)
class Melody:
    notes: tuple[Note, ...]
    source_key_shift: int = 0
    octave_shift: int = 0

    def __post_init__(self):
        object.__setattr__(self, "notes", tuple(Note(*n) for n in self.notes))

    def __len__(self) -> int:
        return len(self.notes)

    def __iter__(self) -> Iterator[Note]:
        return iter(self.notes)

    @property
    def onsets(self) -> list[int]:
        return [n.onset for n in self.notes]

    @property
    def meta(self) -> dict:
        return {"source_key_shift": self.source_key_shift, "octave_shift": self.octave_shift}

    def validate(self) -> None:
        """Raise ``OutOfVocab`` or ``ValueError`` if any invariant is broken."""
        for n in self.notes:
            if not (0 <= n.bar <= MAX_BAR and 0 <= n.pos <= 15
                    and 0 <= n.pitch <= 127 and 1 <= n.dur <= 16):
                raise OutOfVocab(f"note out of range: {n}")
        for a, b in zip(self.notes, self.notes[1:]):
            if a.offset > b.onset or a.onset >= b.onset:
                raise ValueError(f"melody is not monophonic at {a} -> {b}")


def onset_intervals(notes: Sequence[Note]) -> list[float]:
    """Distance to the next onset; the final note gets ``inf``."""
    out: list[float] = [b.onset - a.onset for a, b in zip(notes, notes[1:])]
    if notes:
        out.append(float("inf"))
    return out


# --- track selection and cleaning -------------------------------------------------


def select_melody_track(song: MidiSong, min_notes: int = MIN_MELODY_NOTES) -> list[NoteEvent]:
    """Pick the track with the highest mean pitch among those with enough notes.

    Drum-channel events never count. Ties go to the lowest track index.
    """
    best, best_mean = None, None
    for track in song.tracks:
        pitched = [e for e in track if e.channel != DRUM_CHANNEL]
        if len(pitched) < min_notes:
            continue
        mean = sum(e.pitch for e in pitched) / len(pitched)
        if best_mean is None or mean > best_mean:
            best, best_mean = pitched, mean
    if best is None:
        raise NoEligibleTrack(f"no track has at least {min_notes} pitched notes")
    return list(best)


def monophonize(events: Iterable[NoteEvent]) -> list[NoteEvent]:
    """Keep the top pitch at each onset and cut notes at the next kept onset."""
    by_onset: dict[int, NoteEvent] = {}
    for e in events:
        cur = by_onset.get(e.onset_tick)
        if cur is None or (e.pitch, e.offset_tick) > (cur.pitch, cur.offset_tick):
            by_onset[e.onset_tick] = e
    kept = [by_onset[t] for t in sorted(by_onset)]
    out = []
    for i, e in enumerate(kept):
        off = e.offset_tick
        if i + 1 < len(kept):
            off = min(off, kept[i + 1].onset_tick)
        if off > e.onset_tick:
            out.append(e if off == e.offset_tick else replace(e, offset_tick=off))
    return out


def _round_half_up(num: int, den: int) -> int:
    return (2 * num + den) // (2 * den)


def quantize(events: Sequence[NoteEvent], ticks_per_quarter: int) -> list[Note]:
    """Snap events to the sixteenth grid, then re-impose monophony on the grid."""
    grid = []
    for e in events:
        onset = _round_half_up(4 * e.onset_tick, ticks_per_quarter)
        dur = _round_half_up(4 * (e.offset_tick - e.onset_tick), ticks_per_quarter)
        dur = max(1, min(16, dur))
        grid.append(NoteEvent(onset, onset + dur, e.pitch, e.channel, e.velocity))
    mono = monophonize(grid)
    notes = [Note.at(e.onset_tick, e.pitch, e.offset_tick - e.onset_tick) for e in mono]
    return notes


def filter_empty_bars(notes: Sequence[Note]) -> list[Note]:
    """Close up bars without onsets (leading ones included).

    A note that used to sound across a removed bar is shortened so that the
    line stays monophonic.
    """
    if not notes:
        return []
    used = sorted({n.bar for n in notes})
    remap = {b: i for i, b in enumerate(used)}
    moved = [Note(remap[n.bar], n.pos, n.pitch, n.dur) for n in notes]
    out = []
    for i, n in enumerate(moved):
        if i + 1 < len(moved):
            gap = moved[i + 1].onset - n.onset
            if n.dur > gap:
                n = n._replace(dur=gap)
        out.append(n)
    return out


def _check_bars(notes: Sequence[Note]) -> None:
    if notes and notes[-1].bar > MAX_BAR:
        raise BarOverflow(f"bar index {notes[-1].bar} exceeds {MAX_BAR}")


def key_shift_for(root: int, mode: str) -> int:
    """Semitone shift taking ``root`` to C (major) or A (minor); ties go down."""
    target = 0 if mode == "maj" else 9
    shift = (target - root) % 12
    if shift >= 6:
        shift -= 12
    return shift


def normalize_and_filter(melody: Melody, key: tuple[int, str]) -> Melody:
    """Transpose to C major / A minor, centre the register, remove empty bars.

    ``key`` must be the inferred key of ``melody``. Shifts accumulate in the
    returned melody's metadata, so a second application is a no-op.
    """
    if not melody.notes:
        raise EmptyMelody("nothing to normalize")
    root, mode = key
    shift = key_shift_for(root, mode)
    pitches = [n.pitch + shift for n in melody.notes]
    total, count = sum(pitches), len(pitches)
    # smallest k with mean + 12k >= VOCAL_MEAN_LOW; integer arithmetic keeps it exact
    k = -((total - VOCAL_MEAN_LOW * count) // (12 * count))
    octave = 12 * k
    notes = [n._replace(pitch=p + octave) for n, p in zip(melody.notes, pitches)]
    if any(not 0 <= n.pitch <= 127 for n in notes):
        raise OutOfVocab("pitch range too wide to centre within MIDI bounds")
    notes = filter_empty_bars(notes)
    _check_bars(notes)
    return Melody(
        tuple(notes),
        source_key_shift=melody.source_key_shift + shift,
        octave_shift=melody.octave_shift + octave,
    )


def melody_from_song(song: MidiSong, min_notes: int = 1) -> Melody:
    """Parse-level view of a song: melody track, monophonic, quantized.

    No key or register normalization and no bar filtering; this is how
    generated or reference MIDI is read back for evaluation.
    """
    if any(ts != (4, 4) for ts in song.time_signatures):
        raise NotFourFour(f"time signature {song.time_signature} is not 4/4")
    events = monophonize(select_melody_track(song, min_notes))
    notes = quantize(events, song.ticks_per_quarter)
    if not notes:
        raise EmptyMelody("melody track has no notes")
    _check_bars(notes)
    return Melody(tuple(notes))


def preprocess(song: MidiSong, min_notes: int = MIN_MELODY_NOTES, key_cfg=None) -> Melody:
    """Full dataset preprocessing: select, clean, quantize, filter, normalize."""
    from .key import infer_tonality

    if any(ts != (4, 4) for ts in song.time_signatures):
        raise NotFourFour(f"time signature {song.time_signature} is not 4/4")
    events = monophonize(select_melody_track(song, min_notes))
    notes = quantize(events, song.ticks_per_quarter)
    if not notes:
        raise EmptyMelody("melody track has no notes")
    # bars are closed up before key inference so the key seen here is the
    # key of the final note list
    raw = Melody(tuple(filter_empty_bars(notes)))
    _check_bars(raw.notes)
    return normalize_and_filter(raw, infer_tonality(raw, key_cfg))


def melody_to_events(melody: Melody, ticks_per_sixteenth: int = WRITE_TICKS_PER_SIXTEENTH,
                     velocity: int = 100) -> list[NoteEvent]:
    return [
        NoteEvent(n.onset * ticks_per_sixteenth, n.offset * ticks_per_sixteenth,
                  n.pitch, 0, velocity)
        for n in melody.notes
    ]


def write_midi(melody: Melody) -> bytes:
    """Format 0, 480 ticks per quarter, 120 BPM, 4/4."""
    return write_midi_events(melody_to_events(melody))


# --- JSON lines -------------------------------------------------------------------


def melody_to_json(song_id: str, melody: Melody) -> str:
    return json.dumps({"id": song_id, "notes": [list(n) for n in melody.notes]},
                      separators=(",", ":"))


def melody_from_json(line: str) -> tuple[str, Melody]:
    obj = json.loads(line)
    return str(obj["id"]), Melody(tuple(Note(*map(int, n)) for n in obj["notes"]))


def read_melodies_jsonl(path) -> list[tuple[str, Melody]]:
    with open(path, encoding="utf-8") as fh:
        return [melody_from_json(line) for line in fh if line.strip()]


def write_melodies_jsonl(path, items: Iterable[tuple[str, Melody]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for song_id, mel in items:
            fh.write(melody_to_json(song_id, mel) + "\n")
