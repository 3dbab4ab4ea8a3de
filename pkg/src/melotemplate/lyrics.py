"""Lyrics to template without any paired lyric-melody data.

Rhythm comes from hand-written gap rules, cadence from punctuation, and
tonality and chords from a user-supplied progression.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import EmptyLyrics, EmptyProgression, UnsupportedScript
from .theory import Chord, parse_chord
from .tokenizer import Template, Triple

PUNCT_CLASS = {
    ",": "comma", ";": "comma", "，": "comma", "；": "comma", "、": "comma",
    ".": "period", "!": "period", "?": "period",
    "。": "period", "！": "period", "？": "period",
}
_STRENGTH = {None: 0, "comma": 1, "period": 2}

# Gap to the previous onset, in sixteenths.
EN_GAPS = {"sentence": 8, "word": 4, "syllable": 2}
ZH_GAPS = {"sentence": 8, "word": 4, "syllable": 4}


class LyricUnit(NamedTuple):
    text: str
    word_start: bool
    sentence_start: bool
    punct_after: str | None = None  # None | "comma" | "period"


@dataclass(frozen=True)
class LyricSequence:
    lang: str
    units: tuple[LyricUnit, ...]
    id: str = ""

    def __post_init__(self):
        if self.lang not in ("en", "zh"):
            raise ValueError(f"unsupported language {self.lang!r}")
        if not self.units:
            raise EmptyLyrics("lyric sequence has no units")
        object.__setattr__(self, "units", tuple(LyricUnit(*u) for u in self.units))

    def __len__(self) -> int:
        return len(self.units)


@dataclass(frozen=True)
class ProgressionSpec:
    tonality: str
    chords: tuple[Chord, ...]
    bars_per_chord: int = 1

    def __post_init__(self):
        if self.tonality not in ("maj", "min"):
            raise ValueError(f"tonality must be 'maj' or 'min', got {self.tonality!r}")
        if not self.chords:
            raise EmptyProgression("chord progression is empty")
        if self.bars_per_chord < 1:
            raise ValueError("bars_per_chord must be positive")
        object.__setattr__(self, "chords", tuple(Chord(*c) for c in self.chords))

    @classmethod
    def parse(cls, tonality: str, chords: str | Sequence[str], bars_per_chord: int = 1):
        if isinstance(chords, str):
            chords = [c for c in re.split(r"[,\s]+", chords) if c]
        if not chords:
            raise EmptyProgression("chord progression is empty")
        return cls(tonality, tuple(parse_chord(c) for c in chords), bars_per_chord)


# --- English syllables --------------------------------------------------------------

_VOWELS = set("aeiouy")
_ONSET_DIGRAPHS = {"th", "ch", "sh", "ph", "wh", "gh"}
_LEGAL_ONSETS = _ONSET_DIGRAPHS | {
    "bl", "br", "cl", "cr", "dr", "fl", "fr", "gl", "gr", "pl", "pr", "sc", "sk", "sl",
    "sm", "sn", "sp", "st", "sw", "tr", "tw", "str", "spr", "scr", "spl", "thr", "shr",
}
_SUFFIXES = ("ly", "ness", "ful", "ment", "less")


def _vowel_groups(word: str) -> list[tuple[int, int]]:
    groups = []
    i = 0
    while i < len(word):
        ch = word[i]
        is_vowel = ch in _VOWELS and not (ch == "y" and i == 0)
        if ch == "u" and i > 0 and word[i - 1] == "q":
            is_vowel = False  # the u of qu is part of the consonant
        if is_vowel:
            j = i
            while j < len(word) and word[j] in _VOWELS:
                j += 1
            # i-a and i-o are usually two syllables (li-on, ra-di-o), but not in -tion, -cial
            for k in range(i, j - 1):
                if word[k:k + 2] in ("ia", "io") and not (k > 0 and word[k - 1] in "tscx"):
                    groups.append((i, k + 1))
                    i = k + 1
                    break
            groups.append((i, j))
            i = j
        else:
            i += 1
    return groups


def _silent_e_before_suffix(low: str, groups: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Drop the e of a consonant-e stem before -ly, -ness, ... (lone-ly, hope-ful)."""
    for suffix in _SUFFIXES:
        e_at = len(low) - len(suffix) - 1
        if (low.endswith(suffix) and e_at >= 2 and low[e_at] == "e"
                and low[e_at - 1] not in _VOWELS and low[e_at - 2] in _VOWELS):
            kept = [g for g in groups if g != (e_at, e_at + 1)]
            if kept:
                return kept
    return groups


def syllabify(word: str) -> list[str]:
    """Split an English word into syllables by vowel groups.

    A final silent ``e`` (and the ``e`` of a non-syllabic ``-ed``) is folded
    into the preceding syllable. Two-letter consonant clusters split after
    their first letter; longer ones keep the longest legal onset for the next
    syllable. A final consonant + ``le`` forms its own syllable.
    """
    low = word.lower()
    groups = _silent_e_before_suffix(low, _vowel_groups(low))
    if len(groups) > 1:
        s, e = groups[-1]
        last = low[s:e]
        if last == "e" and e == len(low) and not (
            len(low) >= 3 and low[-2] == "l" and low[-3] not in _VOWELS
        ):
            groups.pop()
        elif last == "e" and e == len(low) - 1 and s > 0:
            before = low[max(0, s - 2):s]
            if low[-1] == "d" and before[-1] not in "td":
                groups.pop()
            elif (low[-1] == "s" and before[-1] not in "sxzcg"
                  and before not in ("ch", "sh")):
                groups.pop()
    if len(groups) <= 1:
        return [word]
    cuts = []
    for k in range(len(groups) - 1):
        end, start = groups[k][1], groups[k + 1][0]
        cluster = low[end:start]
        final_le = (k + 1 == len(groups) - 1 and low[start:] == "e"
                    and cluster.endswith("l") and len(cluster) >= 2)
        if final_le:
            cut = start - 2
        elif len(cluster) <= 1:
            cut = end
        elif cluster[:2] in _ONSET_DIGRAPHS and len(cluster) == 2:
            cut = end
        elif cluster[:2] == "ck":
            cut = end + 2
        elif len(cluster) >= 3:
            # longest legal onset that still leaves a coda consonant
            onset = next((n for n in (3, 2) if n < len(cluster) and cluster[-n:] in _LEGAL_ONSETS), 1)
            cut = start - onset
        else:
            cut = end + 1
        cuts.append(cut)
    pieces, prev = [], 0
    for cut in cuts:
        if cut > prev:
            pieces.append(word[prev:cut])
            prev = cut
    pieces.append(word[prev:])
    return pieces


# --- parsing ------------------------------------------------------------------------

_EN_TOKEN = re.compile(r"[A-Za-zÀ-ÖØ-öø-ÿ'’]+(?:-[A-Za-zÀ-ÖØ-öø-ÿ'’]+)*-?|[,.;!?]")
_ZH_CHAR = re.compile(r"[㐀-䶿一-鿿豈-﫿]")


def _attach(units: list[dict], punct: str) -> None:
    if units and _STRENGTH[punct] > _STRENGTH[units[-1]["punct_after"]]:
        units[-1]["punct_after"] = punct


def _finish(units: list[dict], lang: str, song_id: str) -> LyricSequence:
    if not units:
        raise UnsupportedScript(f"no {lang} syllabifiable content in lyrics")
    if units[-1]["punct_after"] is None:
        units[-1]["punct_after"] = "period"
    out, sentence_start = [], True
    for u in units:
        out.append(LyricUnit(u["text"], u["word_start"] or sentence_start, sentence_start,
                             u["punct_after"]))
        sentence_start = u["punct_after"] is not None
    return LyricSequence(lang, tuple(out), song_id)


def parse_lyrics(text: str, lang: str, song_id: str = "") -> LyricSequence:
    if not text or not text.strip():
        raise EmptyLyrics("lyrics are empty")
    units: list[dict] = []
    if lang == "en":
        for m in _EN_TOKEN.finditer(text):
            tok = m.group(0)
            if tok in PUNCT_CLASS:
                _attach(units, PUNCT_CLASS[tok])
                continue
            parts = [p for p in tok.split("-") if p]
            if len(parts) == 1:
                parts = syllabify(parts[0])
            for k, p in enumerate(parts):
                units.append({"text": p, "word_start": k == 0, "punct_after": None})
    elif lang == "zh":
        for ch in text:
            if ch in PUNCT_CLASS:
                _attach(units, PUNCT_CLASS[ch])
            elif _ZH_CHAR.match(ch):
                units.append({"text": ch, "word_start": True, "punct_after": None})
    else:
        raise ValueError(f"unsupported language {lang!r}")
    return _finish(units, lang, song_id)


def lyrics_from_json(line: str) -> LyricSequence:
    """Read ``{"id","lang","units":[...]}`` or ``{"id","lang","text"}``."""
    obj = json.loads(line)
    lang, song_id = obj["lang"], str(obj.get("id", ""))
    if "units" in obj:
        units = [{"text": u["text"], "word_start": bool(u.get("word_start", True)),
                  "punct_after": u.get("punct_after")} for u in obj["units"]]
        if not units:
            raise EmptyLyrics("lyric units are empty")
        return _finish(units, lang, song_id)
    return parse_lyrics(obj["text"], lang, song_id)


def lyrics_to_json(ls: LyricSequence) -> str:
    return json.dumps({
        "id": ls.id, "lang": ls.lang,
        "units": [u._asdict() for u in ls.units],
    }, ensure_ascii=False)


# --- template rules -----------------------------------------------------------------


def rhythm_from_rules(ls: LyricSequence) -> tuple[list[int], list[int]]:
    """Onsets in sixteenths and the beat-in-bar rhythm token of each unit."""
    gaps = EN_GAPS if ls.lang == "en" else ZH_GAPS
    onsets = []
    for i, u in enumerate(ls.units):
        if i == 0:
            onsets.append(0)
            continue
        if u.sentence_start:
            gap = gaps["sentence"]
        elif u.word_start:
            gap = gaps["word"]
        else:
            gap = gaps["syllable"]
        onsets.append(onsets[-1] + gap)
    return onsets, [(o % 16) // 4 for o in onsets]


def cadence_from_punct(ls: LyricSequence) -> list[str]:
    return [{"comma": "half", "period": "auth"}.get(u.punct_after, "no") for u in ls.units]


def assign_chords(onsets: Sequence[int], spec: ProgressionSpec) -> list[Chord]:
    if not spec.chords:
        raise EmptyProgression("chord progression is empty")
    n = len(spec.chords)
    return [spec.chords[((o // 16) // spec.bars_per_chord) % n] for o in onsets]


def lyrics_to_template(ls: LyricSequence, spec: ProgressionSpec) -> Template:
    onsets, rhythms = rhythm_from_rules(ls)
    chords = assign_chords(onsets, spec)
    cadences = cadence_from_punct(ls)
    return Template(spec.tonality, tuple(Triple(*t) for t in zip(chords, rhythms, cadences)))


def _song_blocks(text: str) -> list[tuple[int, str]]:
    """Blank-line separated songs with the 1-based line each starts on."""
    blocks, cur, start = [], [], 0
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.strip():
            if not cur:
                start = lineno
            cur.append(line)
        elif cur:
            blocks.append((start, "\n".join(cur)))
            cur = []
    if cur:
        blocks.append((start, "\n".join(cur)))
    return blocks


def iter_lyric_file(path, lang: str) -> Iterable[tuple[int, LyricSequence]]:
    """Yield ``(line_number, sequence)`` from a ``.jsonl`` or plain-text file.

    Errors are re-raised with the offending line number in the message.
    """
    from pathlib import Path

    p = Path(path)
    text = p.read_text(encoding="utf-8")
    if p.suffix == ".jsonl":
        items = [(n, line) for n, line in enumerate(text.splitlines(), 1) if line.strip()]
    else:
        items = _song_blocks(text)
    for k, (lineno, chunk) in enumerate(items):
        try:
            if p.suffix == ".jsonl":
                obj = json.loads(chunk)
                obj.setdefault("lang", lang)
                obj.setdefault("id", f"{p.stem}-{k}")
                if obj["lang"] != lang:
                    raise ValueError(f"song language {obj['lang']!r} does not match {lang!r}")
                ls = lyrics_from_json(json.dumps(obj))
            else:
                ls = parse_lyrics(chunk, lang, f"{p.stem}-{k}")
        except (ValueError, KeyError, EmptyLyrics, UnsupportedScript) as exc:
            raise type(exc)(f"line {lineno}: {exc}") from exc
        yield lineno, ls
