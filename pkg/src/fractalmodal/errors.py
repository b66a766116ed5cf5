"""Exception hierarchy shared by loaders, kernels and the batch driver."""


class FractalError(ValueError):
    """Base class for every error raised by this package."""


# ingestion

class WavError(FractalError):
    pass


class NotWav(WavError):
    pass


class UnsupportedEncoding(WavError):
    pass


class TruncatedFile(WavError):
    pass


class ImageError(FractalError):
    pass


class UnsupportedFormat(ImageError):
    pass


class MalformedHeader(ImageError):
    pass


class TruncatedPixelData(ImageError):
    pass


class MalformedPixelData(ImageError):
    pass


class ParseError(FractalError):
    def __init__(self, line: int, message: str = "could not parse value"):
        self.line = line
        super().__init__(f"line {line}: {message}")


# numerics

class InputTooSmall(FractalError):
    pass


class SeriesTooShort(InputTooSmall):
    pass


class DegenerateInput(FractalError):
    pass


class DegenerateRegressor(FractalError):
    pass


class NonPositiveFluctuation(FractalError):
    pass


class TooFewScales(FractalError):
    pass


class LengthMismatch(FractalError):
    pass


class DimensionMismatch(FractalError):
    pass


class AllZeroCrossFluctuation(DegenerateInput):
    pass


class InvalidHurst(FractalError):
    pass


class InvalidSize(FractalError):
    pass


# pipeline

class ManifestError(FractalError):
    pass


class DegenerateVector(FractalError):
    pass


class GroupTooSmall(FractalError):
    pass
