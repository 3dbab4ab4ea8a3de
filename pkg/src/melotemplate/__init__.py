"""Template-based lyric-to-melody toolkit.

Melodies are extracted from MIDI and reduced to templates (tonality, chord,
rhythm, cadence); templates also come from lyrics by rule, and a sampler
turns templates back into melodies. Alignment-regularization math and the
similarity/controllability metrics live alongside.
"""
__version__ = "0.1.0"

from .align import AlignmentMatrix, LossBreakdown, attn_loss, attn_loss_grad, build_alignment, total_loss
from .chords import ChordHmmConfig, infer_chords
from .extract import CadenceConfig, ExtractConfig, extract_cadence, extract_rhythm, extract_template
from .generator import SamplerConfig, generate, sample_categorical
from .key import KeyProfileConfig, infer_tonality
from .lyrics import LyricSequence, LyricUnit, ProgressionSpec, lyrics_to_template, parse_lyrics
from .melody import Melody, Note, normalize_and_filter, preprocess, write_midi
from .metrics import controllability, melody_distance, pd_dd
from .midi import MidiSong, parse_midi, read_midi
from .theory import Chord
from .tokenizer import Template, Triple, decode_melody, decode_template, encode_melody, encode_template
