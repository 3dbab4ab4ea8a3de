"""Exception hierarchy shared by every stage of the pipeline."""


class MelotemplateError(Exception):
    """Base class for all errors raised by this package."""


class MalformedMidi(MelotemplateError):
    pass


class UnsupportedFormat(MelotemplateError):
    pass


class MissingTiming(MelotemplateError):
    pass


class NotFourFour(MelotemplateError):
    pass


class NoEligibleTrack(MelotemplateError):
    pass


class BarOverflow(MelotemplateError):
    pass


class EmptyMelody(MelotemplateError):
    pass


class OutOfVocab(MelotemplateError):
    pass


class MalformedSequence(MelotemplateError):
    pass


class LengthMismatch(MelotemplateError):
    pass


class EmptyLyrics(MelotemplateError):
    pass


class UnsupportedScript(MelotemplateError):
    pass


class EmptyProgression(MelotemplateError):
    pass


class InvalidSize(MelotemplateError):
    pass


class ShapeMismatch(MelotemplateError):
    pass


class NonPositiveAttention(MelotemplateError):
    pass


class AllZeroWeights(MelotemplateError):
    pass


class EmptyCandidateSet(MelotemplateError):
    pass


class NoPairs(MelotemplateError):
    pass
