from typing import Dict, Optional


class YtriError(Exception):
    """Base class for every error raised by the engine."""

    code = "ytri_error"

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class ParseError(YtriError):
    code = "parse_error"

    def __init__(self, message: str, line: int = 1, column: int = 1) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.reason = message
        self.line = line
        self.column = column


class UndefinedGcd(YtriError):
    code = "undefined_gcd"


class ZeroPolynomialError(YtriError):
    code = "zero_polynomial"


class StripError(YtriError):
    code = "outside_strip"


class ProportionalityError(YtriError):
    code = "no_constant"


class HypothesisViolated(YtriError):
    code = "hypothesis_violated"

    def __init__(self, message: str, stage: Optional[str] = None) -> None:
        super().__init__(message if stage is None else f"{stage}: {message}")
        self.stage = stage


class SingularInput(YtriError):
    code = "singular_input"


class NotDecomposable(YtriError):
    code = "not_decomposable"

    def __init__(self, diagnosis: Dict[str, str]) -> None:
        summary = "; ".join(f"{tag}: {reason}" for tag, reason in diagnosis.items())
        super().__init__(f"no theorem shape applies ({summary})")
        self.diagnosis = dict(diagnosis)


class CertificateError(YtriError):
    code = "invalid_certificate"


class RefinementError(YtriError):
    code = "refinement_exhausted"


class ImageDomainError(YtriError):
    code = "outside_image"


class InternalContradiction(YtriError):
    code = "internal_contradiction"
