"""Report payloads and their text/tree serialisations."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml
from pydantic import BaseModel

from ytri import __version__
from ytri.decompose import DecompositionReport
from ytri.errors import NotDecomposable, ParseError, YtriError
from ytri.factors import COMPOSITION_CONVENTION, AtomicMap, Chain
from ytri.inject import InjectiveCertified, InjectivityVerdict, NotInjective
from ytri.inverse import ExplicitMap, InverseCheck, InverseObject, MonotoneInverse
from ytri.mapalg import Classification, NonSingular, Singular, SingularWitness
from ytri.polycore import format_bipoly, format_unipoly
from ytri.realroots import IsolatingInterval

FORMATS = ("text", "tree")


def _q(value: Fraction) -> str:
    return str(value)


def _point(point: Tuple[Fraction, Fraction]) -> List[str]:
    return [_q(point[0]), _q(point[1])]


def _box(box: IsolatingInterval) -> str:
    return f"({box.lower}, {box.upper})"


class WitnessPayload(BaseModel):
    x: str
    y: str


class NonSingularityPayload(BaseModel):
    status: str
    detail: Optional[str] = None
    witness: Optional[WitnessPayload] = None


class ClassificationPayload(BaseModel):
    map_type: List[int]
    dF: str
    is_delta_map: bool
    delta: Optional[str] = None
    is_jacobian_map: bool
    non_singularity: NonSingularityPayload


class FactorPayload(BaseModel):
    kind: str
    P: str
    Q: str
    certificate: Optional[str] = None


class ChainPayload(BaseModel):
    convention: str = COMPOSITION_CONVENTION
    strip: str
    factors: List[FactorPayload]


class VerificationPayload(BaseModel):
    ok: bool
    exact: bool
    counterexample: Optional[List[str]] = None
    max_error: Optional[str] = None


class DecompositionPayload(BaseModel):
    theorem: str
    verified: bool
    triangular_count: int
    quasi_triangular_count: int
    translation: List[str]
    chain: ChainPayload
    stages: List[str]
    inverse_check: Optional[VerificationPayload] = None


class InversePayload(BaseModel):
    kind: str
    domain: str
    inverse: Optional[str] = None
    steps: List[str] = []
    verification: VerificationPayload
    at: Optional[List[str]] = None
    value: Optional[List[str]] = None


class CriterionPayload(BaseModel):
    tag: str
    outcome: str
    detail: str


class VerdictPayload(BaseModel):
    status: str
    criterion: Optional[str] = None
    witness: Optional[List[List[str]]] = None
    reasons: Dict[str, str] = {}
    criteria: List[CriterionPayload]


class EvalPayload(BaseModel):
    at: List[str]
    value: List[str]


class ErrorPayload(BaseModel):
    code: str
    message: str
    line: Optional[int] = None
    column: Optional[int] = None
    diagnosis: Optional[Dict[str, str]] = None


Payload = Union[
    ClassificationPayload,
    DecompositionPayload,
    InversePayload,
    VerdictPayload,
    EvalPayload,
]


class Report(BaseModel):
    command: str
    input: str
    tool_version: str = __version__
    exit_code: int = 0
    result: Optional[Payload] = None
    error: Optional[ErrorPayload] = None
    timing_ms: Optional[float] = None


def witness_payload(witness: SingularWitness) -> WitnessPayload:
    if witness.x is not None:
        x = _q(witness.x)
    else:
        x = f"root in {_box(witness.x_box)}"
    if witness.any_y:
        y = "any"
    elif witness.y is not None:
        y = _q(witness.y)
    else:
        y = f"root in {_box(witness.y_box)}"
    return WitnessPayload(x=x, y=y)


def classification_payload(c: Classification) -> ClassificationPayload:
    status = c.non_singularity
    if isinstance(status, NonSingular):
        ns = NonSingularityPayload(status="non_singular", detail=status.certificate)
    elif isinstance(status, Singular):
        ns = NonSingularityPayload(
            status="singular", witness=witness_payload(status.witness)
        )
    else:
        ns = NonSingularityPayload(status="unknown", detail=status.reason)
    return ClassificationPayload(
        map_type=list(c.map_type),
        dF=format_bipoly(c.dF),
        is_delta_map=c.is_delta_map,
        delta=None if c.delta is None else format_unipoly(c.delta),
        is_jacobian_map=c.is_jacobian_map,
        non_singularity=ns,
    )


def factor_payload(factor: AtomicMap) -> FactorPayload:
    P, Q = factor.components()
    certificate = factor.certificate
    return FactorPayload(
        kind=factor.kind,
        P=format_bipoly(P),
        Q=format_bipoly(Q),
        certificate=None if certificate is None else certificate.detail,
    )


def chain_payload(chain: Chain) -> ChainPayload:
    return ChainPayload(
        strip=str(chain.strip), factors=[factor_payload(f) for f in chain.factors]
    )


def decomposition_payload(report: DecompositionReport) -> DecompositionPayload:
    return DecompositionPayload(
        theorem=report.theorem.value,
        verified=report.verified,
        triangular_count=report.triangular_count,
        quasi_triangular_count=report.quasi_triangular_count,
        translation=_point(report.translation),
        chain=chain_payload(report.chain),
        stages=list(report.stages),
    )


def verification_payload(check: InverseCheck) -> VerificationPayload:
    return VerificationPayload(
        ok=check.ok,
        exact=check.exact,
        counterexample=(
            None if check.counterexample is None else _point(check.counterexample)
        ),
        max_error=None if check.max_error is None else _q(check.max_error),
    )


def _step_text(step: Any) -> str:
    if isinstance(step, MonotoneInverse):
        return (
            f"monotone inverse of alpha = {format_unipoly(step.alpha)}"
            f" on {step.strip}, "
            f"y = (v - ({format_unipoly(step.beta)})) / ({format_unipoly(step.w)})"
        )
    P, Q = step.components()
    return f"{step.kind}: {format_bipoly(P)} ; {format_bipoly(Q)}"


def inverse_payload(
    inverse: InverseObject, check: InverseCheck, at=None, value=None
) -> InversePayload:
    if isinstance(inverse, ExplicitMap):
        payload = InversePayload(
            kind="explicit",
            domain=inverse.domain,
            inverse=str(inverse.inverse),
            verification=verification_payload(check),
        )
    else:
        payload = InversePayload(
            kind="evaluable",
            domain=inverse.domain,
            steps=[_step_text(step) for step in inverse.steps],
            verification=verification_payload(check),
        )
    if at is not None:
        payload.at, payload.value = _point(at), _point(value)
    return payload


def verdict_payload(verdict: InjectivityVerdict) -> VerdictPayload:
    status = verdict.status
    criteria = [
        CriterionPayload(tag=o.tag.value, outcome=o.outcome.value, detail=o.detail)
        for o in verdict.criteria
    ]
    if isinstance(status, InjectiveCertified):
        return VerdictPayload(
            status="injective_certified",
            criterion=status.criterion.value,
            criteria=criteria,
        )
    if isinstance(status, NotInjective):
        return VerdictPayload(
            status="not_injective",
            witness=[_point(status.first), _point(status.second)],
            criteria=criteria,
        )
    return VerdictPayload(
        status="inconclusive", reasons=dict(status.reasons), criteria=criteria
    )


def eval_payload(at, value) -> EvalPayload:
    return EvalPayload(at=_point(at), value=_point(value))


def error_payload(exc: YtriError) -> ErrorPayload:
    payload = ErrorPayload(code=exc.code, message=exc.message)
    if isinstance(exc, ParseError):
        payload.line, payload.column = exc.line, exc.column
        payload.message = exc.reason
    if isinstance(exc, NotDecomposable):
        payload.diagnosis = dict(exc.diagnosis)
    return payload


def report_tree(report: Report, include_timing: bool = True) -> Dict[str, Any]:
    exclude = None if include_timing else {"timing_ms"}
    return report.model_dump(exclude=exclude, exclude_none=True)


def _text_lines(value: Any, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines: List[str] = []
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {item}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict):
                nested = _text_lines(item, indent + 1)
                lines.append(f"{pad}- {nested[0].strip()}")
                lines.extend(nested[1:])
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{value}")
    return lines


def render(report: Report, fmt: str = "text", include_timing: bool = True) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    tree = report_tree(report, include_timing)
    if fmt == "tree":
        return yaml.safe_dump(tree, sort_keys=False, allow_unicode=True)
    return "\n".join(_text_lines(tree)) + "\n"
