"""Standard MIDI File reading and writing.

Only what the melody pipeline needs: note events with absolute tick times,
the first tempo, and the time signatures. Format 2 files are rejected.
"""
from __future__ import annotations

import struct
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import MalformedMidi, MissingTiming, UnsupportedFormat

DEFAULT_TEMPO = 500_000  # us per quarter, i.e. 120 BPM
DRUM_CHANNEL = 9  # channel 10 in 1-based numbering

WRITE_TPQ = 480
WRITE_TICKS_PER_SIXTEENTH = WRITE_TPQ // 4


@dataclass(frozen=True)
class NoteEvent:
    onset_tick: int
    offset_tick: int
    pitch: int
    channel: int = 0
    velocity: int = 100


@dataclass(frozen=True)
class MidiSong:
    tracks: tuple[tuple[NoteEvent, ...], ...]
    ticks_per_quarter: int
    tempo_us_per_quarter: int = DEFAULT_TEMPO
    time_signature: tuple[int, int] = (4, 4)
    # every time signature seen, in file order; a single 4/4 is the norm
    time_signatures: tuple[tuple[int, int], ...] = field(default=((4, 4),))


def _read_varlen(data: bytes, i: int, end: int) -> tuple[int, int]:
    value = 0
    for _ in range(4):
        if i >= end:
            raise MalformedMidi("truncated variable-length quantity")
        b = data[i]
        i += 1
        value = (value << 7) | (b & 0x7F)
        if not b & 0x80:
            return value, i
    raise MalformedMidi("variable-length quantity longer than 4 bytes")


def _parse_track(data: bytes, start: int, end: int):
    """Yield (abs_tick, kind, payload) for one MTrk chunk body."""
    tick = 0
    i = start
    status = None
    events = []
    while i < end:
        delta, i = _read_varlen(data, i, end)
        tick += delta
        if i >= end:
            raise MalformedMidi("event truncated after delta time")
        b = data[i]
        if b == 0xFF:
            if i + 1 >= end:
                raise MalformedMidi("truncated meta event")
            mtype = data[i + 1]
            length, i = _read_varlen(data, i + 2, end)
            if i + length > end:
                raise MalformedMidi("meta event overruns track")
            events.append((tick, "meta", (mtype, data[i:i + length])))
            i += length
            if mtype == 0x2F:
                break
            continue
        if b in (0xF0, 0xF7):
            length, i = _read_varlen(data, i + 1, end)
            i += length
            if i > end:
                raise MalformedMidi("sysex overruns track")
            continue
        if b & 0x80:
            status = b
            i += 1
        elif status is None:
            raise MalformedMidi("running status without a prior status byte")
        kind = status & 0xF0
        channel = status & 0x0F
        nbytes = 1 if kind in (0xC0, 0xD0) else 2
        if i + nbytes > end:
            raise MalformedMidi("channel event truncated")
        args = data[i:i + nbytes]
        i += nbytes
        if kind in (0x80, 0x90):
            events.append((tick, "note", (kind, channel, args[0], args[1])))
    return events


def _pair_notes(events) -> list[NoteEvent]:
    pending: dict[tuple[int, int], deque] = defaultdict(deque)
    notes = []
    for tick, kind, payload in events:
        if kind != "note":
            continue
        status, channel, pitch, velocity = payload
        key = (channel, pitch)
        if status == 0x90 and velocity > 0:
            pending[key].append((tick, velocity))
        elif pending[key]:
            on, vel = pending[key].popleft()
            notes.append(NoteEvent(on, tick, pitch, channel, vel))
    # notes never switched off are dropped, as most readers do
    notes.sort(key=lambda n: (n.onset_tick, n.pitch, n.offset_tick))
    return notes


def parse_midi(data: bytes) -> MidiSong:
    if len(data) < 14 or data[:4] != b"MThd":
        raise MalformedMidi("missing MThd header")
    hlen = struct.unpack(">I", data[4:8])[0]
    if hlen < 6 or 8 + hlen > len(data):
        raise MalformedMidi("bad header length")
    fmt, ntracks, division = struct.unpack(">HHH", data[8:14])
    if fmt == 2:
        raise UnsupportedFormat("format 2 MIDI files are not supported")
    if fmt not in (0, 1):
        raise MalformedMidi(f"unknown MIDI format {fmt}")
    if division & 0x8000:
        raise MissingTiming("SMPTE time division has no ticks-per-quarter")
    if division == 0:
        raise MissingTiming("zero ticks per quarter")

    pos = 8 + hlen
    tracks = []
    tempo = None
    time_sigs: list[tuple[int, int]] = []
    while pos + 8 <= len(data) and len(tracks) < ntracks:
        ctype = data[pos:pos + 4]
        clen = struct.unpack(">I", data[pos + 4:pos + 8])[0]
        body = pos + 8
        if body + clen > len(data):
            raise MalformedMidi("chunk overruns file")
        if ctype == b"MTrk":
            events = _parse_track(data, body, body + clen)
            for tick, kind, payload in events:
                if kind != "meta":
                    continue
                mtype, mdata = payload
                if mtype == 0x51 and len(mdata) == 3 and tempo is None:
                    tempo = int.from_bytes(mdata, "big")
                elif mtype == 0x58 and len(mdata) >= 2:
                    time_sigs.append((mdata[0], 2 ** mdata[1]))
            tracks.append(tuple(_pair_notes(events)))
        pos = body + clen
    if len(tracks) != ntracks:
        raise MalformedMidi(f"header announces {ntracks} tracks, found {len(tracks)}")
    if not time_sigs:
        time_sigs = [(4, 4)]
    return MidiSong(
        tracks=tuple(tracks),
        ticks_per_quarter=division,
        tempo_us_per_quarter=DEFAULT_TEMPO if tempo is None else tempo,
        time_signature=time_sigs[0],
        time_signatures=tuple(time_sigs),
    )


def read_midi(path) -> MidiSong:
    with open(path, "rb") as fh:
        return parse_midi(fh.read())


def _varlen(value: int) -> bytes:
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    return bytes(reversed(out))


def _track_chunk(events: Iterable[tuple[int, int, bytes]]) -> bytes:
    body = bytearray()
    last = 0
    for tick, _order, payload in sorted(events, key=lambda e: (e[0], e[1])):
        body += _varlen(tick - last) + payload
        last = tick
    body += _varlen(0) + b"\xff\x2f\x00"
    return b"MTrk" + struct.pack(">I", len(body)) + bytes(body)


def write_midi_events(
    notes: Sequence[NoteEvent],
    ticks_per_quarter: int = WRITE_TPQ,
    tempo_us_per_quarter: int = DEFAULT_TEMPO,
    time_signature: tuple[int, int] = (4, 4),
) -> bytes:
    """Serialize note events as a single-track format-0 file."""
    num, den = time_signature
    den_pow = den.bit_length() - 1
    events = [
        (0, 0, b"\xff\x51\x03" + tempo_us_per_quarter.to_bytes(3, "big")),
        (0, 0, bytes([0xFF, 0x58, 0x04, num, den_pow, 24, 8])),
    ]
    for n in notes:
        ch = n.channel & 0x0F
        # note-offs sort before note-ons at the same tick
        events.append((n.offset_tick, 1, bytes([0x80 | ch, n.pitch, 0])))
        events.append((n.onset_tick, 2, bytes([0x90 | ch, n.pitch, n.velocity])))
    header = b"MThd" + struct.pack(">IHHH", 6, 0, 1, ticks_per_quarter)
    return header + _track_chunk(events)


def write_multitrack(
    tracks: Sequence[Sequence[NoteEvent]],
    ticks_per_quarter: int = WRITE_TPQ,
    time_signature: tuple[int, int] = (4, 4),
) -> bytes:
    """Format-1 writer; used to build synthetic corpora for tests and demos."""
    num, den = time_signature
    den_pow = den.bit_length() - 1
    conductor = _track_chunk([
        (0, 0, b"\xff\x51\x03" + DEFAULT_TEMPO.to_bytes(3, "big")),
        (0, 0, bytes([0xFF, 0x58, 0x04, num, den_pow, 24, 8])),
    ])
    chunks = [conductor]
    for notes in tracks:
        events = []
        for n in notes:
            ch = n.channel & 0x0F
            events.append((n.offset_tick, 1, bytes([0x80 | ch, n.pitch, 0])))
            events.append((n.onset_tick, 2, bytes([0x90 | ch, n.pitch, n.velocity])))
        chunks.append(_track_chunk(events))
    header = b"MThd" + struct.pack(">IHHH", 6, 1, len(chunks), ticks_per_quarter)
    return header + b"".join(chunks)
