from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from melotemplate import kernels
from melotemplate.errors import EmptyMelody, LengthMismatch, NoPairs
from melotemplate.extract import extract_template
from melotemplate.melody import Melody, Note
from melotemplate.metrics import (
    controllability,
    curve_distance,
    evaluate_control,
    evaluate_similarity,
    melody_distance,
    pd_dd,
    pitch_curve,
    scaled_centred,
)
from melotemplate.theory import Chord
from melotemplate.tokenizer import Template, Triple

from oracles import delannoy, exhaustive_dtw


def mel(*spec):
    """(onset, pitch, dur) triples."""
    return Melody(tuple(Note.at(o, p, d) for o, p, d in spec))


def test_pd_examples():
    a = mel((0, 60, 4), (4, 64, 4))
    b = mel((0, 60, 4), (4, 67, 4))
    assert pd_dd(a, a) == (100.0, 100.0)
    assert pd_dd(a, b) == (50.0, 100.0)
    assert pd_dd(a, mel((0, 70, 2)))[0] == 0.0
    assert pd_dd(a, b) == pd_dd(b, a)
    with pytest.raises(EmptyMelody):
        pd_dd(Melody(()), a)


def test_pitch_curve_holds_through_rests():
    assert pitch_curve(mel((2, 60, 2), (8, 62, 1))) == [60, 60, 60, 60, 60, 60, 62]


def exact_md(a, b):
    """Exhaustive path search on the centred curves, kept exact by clearing denominators."""
    na, nb = len(a), len(b)
    x = [int(v) * na * nb - nb * int(sum(a)) for v in a]  # (a_i - mean a) * na * nb
    y = [int(v) * na * nb - na * int(sum(b)) for v in b]
    cost, length = exhaustive_dtw(x, y)
    cost = Fraction(cost, na * nb)
    return cost / length, cost, length


def test_path_enumeration_matches_delannoy():
    from oracles import path_count_check

    for n in range(1, 6):
        for m in range(1, 6):
            assert path_count_check(n, m) == delannoy(n - 1, m - 1)


def test_md_matches_exhaustive_search():
    rng = np.random.default_rng(8)
    checked = 0
    while checked < 250:
        n, m = rng.integers(1, 13, 2)
        if delannoy(n - 1, m - 1) > 50_000:
            continue
        a = list(rng.integers(55, 80, n))
        b = list(rng.integers(55, 80, m))
        md, cost, length = exact_md(a, b)
        x, y, scale = scaled_centred(a, b)
        got_cost, got_len = kernels.dtw_int(x, y)
        assert (Fraction(got_cost, scale), got_len) == (cost, length)
        assert curve_distance(a, b) == pytest.approx(float(md), rel=1e-12, abs=1e-15)
        checked += 1


def test_md_hand_built_melodies():
    a = mel((0, 60, 2), (2, 62, 2), (4, 64, 2), (6, 65, 2))
    b = mel((0, 60, 1), (1, 64, 3), (4, 62, 2), (6, 67, 2))
    expected, _, _ = exact_md(pitch_curve(a), pitch_curve(b))
    assert melody_distance(a, b) == pytest.approx(float(expected), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(40, 80), st.integers(1, 8), st.integers(0, 3)),
                min_size=1, max_size=20),
       st.sampled_from([-12, 12, 24, 5]))
def test_md_sanity(rows, shift):
    notes, t = [], 0
    for p, d, rest in rows:
        notes.append(Note.at(t, p, d))
        t += d + rest
    a = Melody(tuple(notes))
    b = Melody(tuple(n._replace(pitch=n.pitch + shift) for n in notes))
    assert melody_distance(a, a) == 0.0
    assert melody_distance(a, b) == 0.0
    assert melody_distance(b, a) == 0.0


def test_controllability_examples():
    m = mel((5, 62, 2), (8, 60, 8))
    t = Template("maj", (Triple(Chord(7, "maj"), 1, "no"), Triple(Chord(0, "maj"), 2, "auth")))
    rep = controllability(m, t)
    assert rep.ra == 100.0 and rep.aa == 100.0 and rep.ca == 100.0
    bad = Template("maj", (Triple(Chord(0, "maj"), 1, "half"), Triple(Chord(0, "maj"), 2, "auth")))
    rep = controllability(m, bad)
    assert rep.ca == 50.0 and rep.aa == 50.0
    with pytest.raises(LengthMismatch):
        controllability(m, Template("maj", bad.triples[:1]))


def test_round_trip_law(corpus_melodies):
    for m in corpus_melodies:
        t = extract_template(m)
        rep = controllability(m, t)
        assert (rep.ta, rep.ra, rep.aa) == (100.0, 100.0, 100.0)
        non_chord = any(n.pitch % 12 not in c.pitch_classes for n, c in zip(m, t.chords))
        assert (rep.ca < 100.0) == non_chord


def test_corpus_reports(corpus_melodies):
    corpus = {f"s{i}": m for i, m in enumerate(corpus_melodies[:10])}
    rep = evaluate_similarity(corpus, corpus)
    assert (rep.pd, rep.dd, rep.md) == (100.0, 100.0, 0.0)
    partial = dict(corpus)
    partial.pop("s3")
    partial["extra"] = corpus["s0"]
    rep = evaluate_similarity(partial, corpus)
    assert rep.unpaired == ["extra", "s3"] and len(rep.per_song) == 9
    with pytest.raises(NoPairs):
        evaluate_similarity({"a": corpus["s0"]}, {"b": corpus["s0"]})
    templates = {k: extract_template(m) for k, m in corpus.items()}
    ctl = evaluate_control(corpus, templates)
    assert (ctl.ta, ctl.ra, ctl.aa) == (100.0, 100.0, 100.0)
