import pytest

from melotemplate.config import extract_config_from_flat, extract_config_to_dict, load_extract_config, parse_flat
from melotemplate.theory import ALL_CHORDS, Chord

TEXT = """
# cadence tweaks
cadence.p_auth = 0        # deterministic
cadence.short_dur = 3
chords.candidates = C, Am, F, G
chords.switch_penalty = 2.5
"""


def test_parse_and_apply(tmp_path):
    assert parse_flat(TEXT)["cadence.p_auth"] == "0"
    path = tmp_path / "x.cfg"
    path.write_text(TEXT, encoding="utf-8")
    cfg = load_extract_config(path)
    assert cfg.cadence.p_auth == 0.0 and cfg.cadence.short_dur == 3
    assert cfg.chords.candidate_chords == (Chord(0, "maj"), Chord(9, "min"), Chord(5, "maj"),
                                           Chord(7, "maj"))
    assert cfg.chords.switch_penalty == 2.5
    assert extract_config_to_dict(cfg)["chords"]["candidate_chords"][1] == "Chord_A_min"


def test_all_candidates():
    cfg = extract_config_from_flat({"chords.candidates": "all"})
    assert cfg.chords.candidate_chords == ALL_CHORDS


@pytest.mark.parametrize("text", ["nonsense", "foo.bar = 1", "cadence.nope = 1", "cadence.p_auth = 2"])
def test_rejects(text):
    with pytest.raises(ValueError):
        extract_config_from_flat(parse_flat(text))
