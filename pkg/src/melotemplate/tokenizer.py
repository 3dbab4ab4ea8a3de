"""Token vocabularies for melody and template sequences.

Melody notes become four tokens (``Bar_b Pos_p Pitch_v Dur_d``); a template is
a tonality token followed by one ``Chord Rhy Cad`` triple per note. Integer
ids enumerate one shared vocabulary in the order of ``VOCAB``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import MalformedSequence, OutOfVocab
from .melody import Melody, Note
from .theory import ALL_CHORDS, PITCH_NAMES, QUALITIES, Chord

CADENCES = ("no", "half", "auth")

BAR_TOKENS = tuple(f"Bar_{b}" for b in range(256))
POS_TOKENS = tuple(f"Pos_{p}" for p in range(16))
PITCH_TOKENS = tuple(f"Pitch_{v}" for v in range(128))
DUR_TOKENS = tuple(f"Dur_{d}" for d in range(1, 17))
TON_TOKENS = ("Ton_maj", "Ton_min")
CHORD_TOKENS = tuple(c.token for c in ALL_CHORDS)
RHY_TOKENS = tuple(f"Rhy_{r}" for r in range(4))
CAD_TOKENS = tuple(f"Cad_{c}" for c in CADENCES)

MELODY_VOCAB = BAR_TOKENS + POS_TOKENS + PITCH_TOKENS + DUR_TOKENS
TEMPLATE_VOCAB = TON_TOKENS + CHORD_TOKENS + RHY_TOKENS + CAD_TOKENS
VOCAB = MELODY_VOCAB + TEMPLATE_VOCAB
TOKEN_TO_ID = {tok: i for i, tok in enumerate(VOCAB)}

_CHORD_BY_TOKEN = {c.token: c for c in ALL_CHORDS}


class Triple(NamedTuple):
    chord: Chord
    rhythm: int
    cadence: str


@dataclass(frozen=True)
class Template:
    tonality: str  # "maj" | "min"
    triples: tuple[Triple, ...]

    def __post_init__(self):
        if self.tonality not in ("maj", "min"):
            raise OutOfVocab(f"unknown tonality {self.tonality!r}")
        object.__setattr__(self, "triples", tuple(Triple(*t) for t in self.triples))

    def __len__(self) -> int:
        return len(self.triples)

    @property
    def chords(self) -> list[Chord]:
        return [t.chord for t in self.triples]

    @property
    def rhythms(self) -> list[int]:
        return [t.rhythm for t in self.triples]

    @property
    def cadences(self) -> list[str]:
        return [t.cadence for t in self.triples]


def _split(token: str, prefix: str, lo: int, hi: int) -> int:
    if not token.startswith(prefix):
        raise MalformedSequence(f"expected {prefix}* token, got {token!r}")
    try:
        value = int(token[len(prefix):])
    except ValueError:
        raise MalformedSequence(f"bad token {token!r}") from None
    if not lo <= value <= hi:
        raise MalformedSequence(f"token {token!r} out of range")
    return value


def encode_melody(melody: Melody) -> list[str]:
    tokens = []
    for n in melody.notes:
        if not (0 <= n.bar <= 255 and 0 <= n.pos <= 15
                and 0 <= n.pitch <= 127 and 1 <= n.dur <= 16):
            raise OutOfVocab(f"note {n} has no token encoding")
        tokens += [f"Bar_{n.bar}", f"Pos_{n.pos}", f"Pitch_{n.pitch}", f"Dur_{n.dur}"]
    return tokens


def decode_melody(tokens: Sequence[str]) -> Melody:
    if len(tokens) % 4:
        raise MalformedSequence(f"melody token count {len(tokens)} is not a multiple of 4")
    notes = []
    for i in range(0, len(tokens), 4):
        bar, pos, pitch, dur = tokens[i:i + 4]
        notes.append(Note(
            _split(bar, "Bar_", 0, 255),
            _split(pos, "Pos_", 0, 15),
            _split(pitch, "Pitch_", 0, 127),
            _split(dur, "Dur_", 1, 16),
        ))
    return Melody(tuple(notes))


def encode_template(template: Template) -> list[str]:
    tokens = [f"Ton_{template.tonality}"]
    for chord, rhy, cad in template.triples:
        if chord.quality not in QUALITIES or not 0 <= chord.root < 12:
            raise OutOfVocab(f"chord {chord} not in vocabulary")
        if rhy not in range(4) or cad not in CADENCES:
            raise OutOfVocab(f"bad rhythm/cadence ({rhy}, {cad})")
        tokens += [chord.token, f"Rhy_{rhy}", f"Cad_{cad}"]
    return tokens


def decode_template(tokens: Sequence[str]) -> Template:
    if not tokens or tokens[0] not in TON_TOKENS:
        raise MalformedSequence("template must start with a tonality token")
    if (len(tokens) - 1) % 3:
        raise MalformedSequence(f"template token count {len(tokens)} is not 1 + 3N")
    triples = []
    for i in range(1, len(tokens), 3):
        chord_tok, rhy_tok, cad_tok = tokens[i:i + 3]
        if chord_tok not in _CHORD_BY_TOKEN:
            raise MalformedSequence(f"expected chord token, got {chord_tok!r}")
        if cad_tok not in CAD_TOKENS:
            raise MalformedSequence(f"expected cadence token, got {cad_tok!r}")
        triples.append(Triple(_CHORD_BY_TOKEN[chord_tok], _split(rhy_tok, "Rhy_", 0, 3),
                              cad_tok[4:]))
    return Template(tokens[0][4:], tuple(triples))


def token_ids(tokens: Iterable[str]) -> list[int]:
    try:
        return [TOKEN_TO_ID[t] for t in tokens]
    except KeyError as exc:
        raise OutOfVocab(f"unknown token {exc.args[0]!r}") from None


# --- JSON lines -------------------------------------------------------------------


def pair_to_json(song_id: str, template: Template | None, melody: Melody | None) -> str:
    obj: dict = {"id": song_id}
    if template is not None:
        obj["template"] = encode_template(template)
    if melody is not None:
        obj["melody"] = encode_melody(melody)
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def pair_from_json(line: str) -> tuple[str, Template | None, Melody | None]:
    obj = json.loads(line)
    template = decode_template(obj["template"]) if "template" in obj else None
    melody = decode_melody(obj["melody"]) if "melody" in obj else None
    return str(obj["id"]), template, melody


__all__ = [
    "Template", "Triple", "VOCAB", "TOKEN_TO_ID", "CADENCES", "PITCH_NAMES",
    "encode_melody", "decode_melody", "encode_template", "decode_template",
    "token_ids", "pair_to_json", "pair_from_json",
]
