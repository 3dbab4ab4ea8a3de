import json

import pytest

from melotemplate.errors import EmptyLyrics, EmptyProgression, UnsupportedScript
from melotemplate.lyrics import (
    LyricSequence,
    LyricUnit,
    ProgressionSpec,
    assign_chords,
    cadence_from_punct,
    iter_lyric_file,
    lyrics_from_json,
    lyrics_to_json,
    lyrics_to_template,
    parse_lyrics,
    rhythm_from_rules,
    syllabify,
)
from melotemplate.theory import Chord

TWINKLE = "Twin-kle twin-kle lit-tle star,"
ZH = "一闪一闪亮晶晶，"

# Dictionary hyphenations; the rhythm only depends on the syllable count.
REFERENCE = """hel-lo wa-ter mu-sic lit-tle star twin-kle hap-py yel-low win-dow gar-den
sum-mer win-ter ba-by lov-er dan-cing sing-er to-geth-er for-ev-er moun-tain riv-er
sun-shine rain-bow heart-beat mem-o-ry yes-ter-day to-mor-row morn-ing dream
beau-ti-ful won-der-ful feel-ing sil-ver gold-en o-cean wish-es want-ed jumped
danced love time make home light night stone bro-ken sim-ple ta-ble pur-ple can-dle
bot-tle flow-er sis-ter broth-er moth-er fa-ther an-i-mal el-e-phant ba-nan-a
com-put-er pic-nic rock-et pock-et chick-en kitch-en sto-ry mag-ic un-der o-ver
nev-er a-gain a-lone be-cause be-fore de-cide re-mem-ber hap-pi-ness lone-ly
kind-ness qui-et li-on vid-e-o ra-di-o pi-an-o stu-dent ho-tel mo-ment ba-sic
chil-dren hun-dred pump-kin hope-ful state-ment na-tion spe-cial shin-ing
fall-ing heav-en an-gel bright-ly gen-tle lit-tle tea-cher sleep-ing walk-ing
thun-der mir-ror shad-ow""".split()


def test_twinkle_units():
    ls = parse_lyrics(TWINKLE, "en")
    assert [u.text for u in ls.units] == ["Twin", "kle", "twin", "kle", "lit", "tle", "star"]
    assert [u.word_start for u in ls.units] == [True, False, True, False, True, False, True]
    assert ls.units[0].sentence_start and not any(u.sentence_start for u in ls.units[1:])
    assert ls.units[-1].punct_after == "comma"


def test_twinkle_rhythm_and_cadence():
    ls = parse_lyrics(TWINKLE, "en")
    assert rhythm_from_rules(ls) == ([0, 2, 6, 8, 12, 14, 18], [0, 0, 1, 2, 3, 3, 0])
    assert cadence_from_punct(ls) == ["no"] * 6 + ["half"]


def test_zh_example():
    ls = parse_lyrics(ZH, "zh")
    assert len(ls) == 7 and ls.units[-1].punct_after == "comma"
    assert rhythm_from_rules(ls) == ([0, 4, 8, 12, 16, 20, 24], [0, 1, 2, 3, 0, 1, 2])


def test_fallback_and_terminal_period():
    ls = parse_lyrics("hello", "en")
    assert [u.text for u in ls.units] == ["hel", "lo"]
    assert ls.units[-1].punct_after == "period"
    assert rhythm_from_rules(parse_lyrics("star", "en")) == ([0], [0])


def test_sentence_gaps_and_punctuation_mapping():
    ls = parse_lyrics("Up a-bove; so high! The world?", "en")
    assert [u.punct_after for u in ls.units] == [None, None, "comma", None, "period", None,
                                                 "period"]
    onsets, _ = rhythm_from_rules(ls)
    assert onsets == [0, 4, 6, 14, 18, 26, 30]
    cads = cadence_from_punct(ls)
    assert cads.count("auth") == 2 and cads.count("half") == 1


def test_errors():
    with pytest.raises(EmptyLyrics):
        parse_lyrics("   ", "en")
    with pytest.raises(UnsupportedScript):
        parse_lyrics("一闪一闪", "en")
    with pytest.raises(UnsupportedScript):
        parse_lyrics("hello", "zh")
    with pytest.raises(EmptyProgression):
        ProgressionSpec.parse("maj", "")


def test_assign_chords_cycles():
    spec = ProgressionSpec.parse("min", "Am,F,C,G")
    am, f, c, g = spec.chords
    assert assign_chords([0, 16, 32, 48], spec) == [am, f, c, g]
    assert assign_chords([0, 4, 15], spec) == [am] * 3
    assert assign_chords([5 * 16], spec) == [f]
    two = ProgressionSpec.parse("min", "Am F", bars_per_chord=2)
    assert assign_chords([0, 16, 32, 64], two) == [am, am, two.chords[1], am]


def test_template_columns_independent():
    ls = parse_lyrics(TWINKLE, "en")
    a = lyrics_to_template(ls, ProgressionSpec.parse("maj", "C"))
    b = lyrics_to_template(ls, ProgressionSpec.parse("maj", "C,G,Am,F"))
    assert len(a) == 7 and a.cadences[-1] == "half"
    assert a.rhythms == b.rhythms and a.cadences == b.cadences
    assert a.chords == [Chord(0, "maj")] * 7 and a.chords != b.chords


def test_json_round_trip():
    ls = parse_lyrics(TWINKLE, "en", "tw")
    assert lyrics_from_json(lyrics_to_json(ls)) == ls
    again = lyrics_from_json(json.dumps({"id": "z", "lang": "zh", "text": ZH}))
    assert len(again) == 7 and again.id == "z"


def test_file_errors_carry_line_numbers(tmp_path):
    path = tmp_path / "songs.txt"
    path.write_text("Twin-kle star.\n\n\n12345\n", encoding="utf-8")
    with pytest.raises(UnsupportedScript, match="line 4"):
        list(iter_lyric_file(path, "en"))


def test_syllable_counts_against_reference():
    agree = sum(len(syllabify(w.replace("-", ""))) == w.count("-") + 1 for w in REFERENCE)
    assert agree / len(REFERENCE) >= 0.9


def test_sequence_invariants():
    with pytest.raises(EmptyLyrics):
        LyricSequence("en", ())
    ls = LyricSequence("en", (LyricUnit("la", True, True, "period"),))
    assert cadence_from_punct(ls) == ["auth"]
