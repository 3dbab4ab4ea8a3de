"""Objective metrics: melody similarity and template controllability."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .errors import EmptyMelody, LengthMismatch, NoPairs
from .extract import CadenceConfig, is_no_cadence
from .key import KeyProfileConfig, infer_tonality
from .melody import Melody, onset_intervals
from .theory import NORMALIZED_TONIC
from .tokenizer import Template


def _notes(m):
    notes = getattr(m, "notes", m)
    if len(notes) == 0:
        raise EmptyMelody("metric needs a nonempty melody")
    return notes


def histogram_overlap(a, b, support) -> float:
    """Overlapped area (percent) of two count-normalized histograms."""
    ha = np.array([a.count(v) for v in support], dtype=np.float64)
    hb = np.array([b.count(v) for v in support], dtype=np.float64)
    return float(100.0 * np.minimum(ha / len(a), hb / len(b)).sum())


def pd_dd(hyp, ref) -> tuple[float, float]:
    h, r = _notes(hyp), _notes(ref)
    pd = histogram_overlap([n.pitch for n in h], [n.pitch for n in r], range(128))
    dd = histogram_overlap([n.dur for n in h], [n.dur for n in r], range(1, 17))
    return pd, dd


def pitch_curve(melody) -> list[int]:
    """Pitch at every sixteenth from the first onset to the last offset.

    Rests hold the previous pitch.
    """
    notes = _notes(melody)
    start = notes[0].onset
    end = max(n.offset for n in notes)
    curve = [0] * (end - start)
    for i, n in enumerate(notes):
        stop = notes[i + 1].onset if i + 1 < len(notes) else end
        for t in range(n.onset, max(stop, n.offset)):
            if t - start < len(curve):
                curve[t - start] = n.pitch
    return curve


def scaled_centred(a, b) -> tuple[np.ndarray, np.ndarray, int]:
    """Mean-removed curves scaled to integers.

    ``|x_i - y_j| / scale`` equals ``|(a_i - mean a) - (b_j - mean b)|`` exactly,
    so DTW can run on integers without round-off in comparisons.
    """
    na, nb = len(a), len(b)
    sa, sb = sum(a), sum(b)
    x = np.array([na * nb * v - nb * sa for v in a], dtype=np.int64)
    y = np.array([na * nb * v - na * sb for v in b], dtype=np.int64)
    return x, y, na * nb


def curve_distance(a, b) -> float:
    """DTW cost of two mean-centred curves divided by the warping-path length."""
    x, y, scale = scaled_centred(a, b)
    cost, length = kernels.dtw_int(x, y)
    return cost / scale / length


def melody_distance(hyp, ref) -> float:
    return curve_distance(pitch_curve(hyp), pitch_curve(ref))


@dataclass
class SimilarityReport:
    pd: float
    dd: float
    md: float
    per_song: list[dict] = field(default_factory=list)
    unpaired: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ControlReport:
    ta: float
    ca: float
    ra: float
    aa: float
    per_song: list[dict] = field(default_factory=list)
    unpaired: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SongControl:
    tonality_ok: bool
    chord_ok: list[bool]
    rhythm_ok: list[bool]
    cadence_ok: list[bool]

    def percentages(self) -> dict:
        n = len(self.chord_ok)
        return {
            "ta": 100.0 * self.tonality_ok,
            "ca": 100.0 * sum(self.chord_ok) / n,
            "ra": 100.0 * sum(self.rhythm_ok) / n,
            "aa": 100.0 * sum(self.cadence_ok) / n,
        }


def song_control(melody: Melody, template: Template, cfg: CadenceConfig | None = None,
                 key_cfg: KeyProfileConfig | None = None) -> SongControl:
    cfg = cfg or CadenceConfig()
    notes = _notes(melody)
    if len(notes) != len(template):
        raise LengthMismatch(f"{len(notes)} notes vs {len(template)} template triples")
    expected_key = (NORMALIZED_TONIC[template.tonality], template.tonality)
    chord_ok, rhythm_ok, cadence_ok = [], [], []
    for note, triple, interval in zip(notes, template.triples, onset_intervals(notes)):
        chord_ok.append(note.pitch % 12 in triple.chord.pitch_classes)
        rhythm_ok.append(note.pos // 4 == triple.rhythm)
        cadence_ok.append(is_no_cadence(note.dur, interval, cfg) == (triple.cadence == "no"))
    return SongControl(infer_tonality(notes, key_cfg) == expected_key,
                       chord_ok, rhythm_ok, cadence_ok)


def controllability(melody: Melody, template: Template, cfg: CadenceConfig | None = None,
                    key_cfg: KeyProfileConfig | None = None) -> ControlReport:
    sc = song_control(melody, template, cfg, key_cfg)
    p = sc.percentages()
    return ControlReport(p["ta"], p["ca"], p["ra"], p["aa"], per_song=[p])


def evaluate_similarity(hyps: dict[str, Melody], refs: dict[str, Melody]) -> SimilarityReport:
    ids = sorted(set(hyps) & set(refs))
    unpaired = sorted(set(hyps) ^ set(refs))
    if not ids:
        raise NoPairs("no song id appears on both sides")
    rows = []
    for song_id in ids:
        pd, dd = pd_dd(hyps[song_id], refs[song_id])
        md = melody_distance(hyps[song_id], refs[song_id])
        rows.append({"id": song_id, "pd": pd, "dd": dd, "md": md})
    mean = lambda key: float(np.mean([r[key] for r in rows]))  # noqa: E731
    return SimilarityReport(mean("pd"), mean("dd"), mean("md"), rows, unpaired)


def evaluate_control(melodies: dict[str, Melody], templates: dict[str, Template],
                     cfg: CadenceConfig | None = None) -> ControlReport:
    """TA is a share of songs; CA, RA and AA are shares of all notes."""
    ids = sorted(set(melodies) & set(templates))
    unpaired = sorted(set(melodies) ^ set(templates))
    if not ids:
        raise NoPairs("no song id appears on both sides")
    rows, ta, ca, ra, aa, total = [], 0, 0, 0, 0, 0
    for song_id in ids:
        sc = song_control(melodies[song_id], templates[song_id], cfg)
        rows.append({"id": song_id, **sc.percentages()})
        ta += sc.tonality_ok
        ca += sum(sc.chord_ok)
        ra += sum(sc.rhythm_ok)
        aa += sum(sc.cadence_ok)
        total += len(sc.chord_ok)
    return ControlReport(100.0 * ta / len(ids), 100.0 * ca / total, 100.0 * ra / total,
                         100.0 * aa / total, rows, unpaired)
