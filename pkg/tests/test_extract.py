import numpy as np
import pytest

from melotemplate.errors import LengthMismatch
from melotemplate.extract import (
    CadenceConfig,
    ExtractConfig,
    extract_cadence,
    extract_rhythm,
    extract_template,
)
from melotemplate.melody import Melody, Note, onset_intervals
from melotemplate.theory import Chord
from melotemplate.tokenizer import encode_template

C, G, A_MIN = Chord(0, "maj"), Chord(7, "maj"), Chord(9, "min")


def _cad(notes, chords, key=(0, "maj"), **kw):
    return extract_cadence(notes, key, chords, CadenceConfig(**kw), rng=0)


def test_short_close_note_is_no():
    notes = [Note.at(0, 62, 2), Note.at(3, 64, 4)]
    assert _cad(notes, [G, G])[0] == "no"


def test_tonic_root_is_auth():
    notes = [Note.at(0, 72, 8), Note.at(10, 64, 4)]
    assert _cad(notes, [C, C])[0] == "auth"


def test_half_when_no_authentic_rule_applies():
    notes = [Note.at(0, 62, 6), Note.at(8, 64, 4)]
    assert _cad(notes, [G, G])[0] == "half"


def test_single_note_melody():
    t = extract_template(Melody((Note(0, 0, 60, 16),)))
    assert len(t) == 1 and t.cadences == ["auth"] and t.tonality == "maj"


def test_probabilistic_branch_uses_p_auth():
    # E over G chord, long gap: third of the tonic triad, interval 12 > 8
    notes = [Note.at(0, 64, 8), Note.at(12, 67, 4)]
    assert _cad(notes, [G, G], p_auth=0.0)[0] == "half"
    assert _cad(notes, [G, G], p_auth=1.0)[0] == "auth"
    draws = [extract_cadence(notes, (0, "maj"), [G, G], CadenceConfig(p_auth=0.3), rng=s)[0]
             for s in range(4000)]
    assert draws.count("auth") / len(draws) == pytest.approx(0.3, abs=0.03)


def test_minor_tonic():
    notes = [Note.at(0, 69, 8), Note.at(10, 72, 8), Note.at(28, 64, 4)]
    assert _cad(notes, [A_MIN, C, G], key=(9, "min")) == ["auth", "half", "auth"]


def test_rhythm():
    assert extract_rhythm([Note(0, p, 60, 1) for p in range(16)]) == [p // 4 for p in range(16)]


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        _cad([Note(0, 0, 60, 4)], [])


def test_no_cadence_guarantee_and_determinism(corpus_melodies):
    cfg = ExtractConfig()
    for m in corpus_melodies:
        t = extract_template(m, cfg, rng=np.random.default_rng(5))
        for note, interval, cad in zip(m.notes, onset_intervals(m.notes), t.cadences):
            if cad == "no":
                assert note.dur < 4 and interval < 6
    zero = ExtractConfig(cadence=CadenceConfig(p_auth=0.0))
    for m in corpus_melodies[:10]:
        a = encode_template(extract_template(m, zero, rng=1))
        b = encode_template(extract_template(m, zero, rng=999))
        assert a == b
