"""HTTP service wrapping the core package.

Stateless request/response endpoints mirroring the CLI commands; `.ars`
documents travel in the request body.  Domain outcomes (not decreasing, not
confluent, invalid certificate) are ordinary 200 payloads; malformed inputs
map to 422, completion-invariant violations to 500.
"""

from __future__ import annotations

from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import jsonio
from .analysis import (
    certificate_problems,
    certify,
    check_locally_decreasing,
    confluent_oracle,
    conv_map_from_report,
    find_precedence,
    newman_labeling,
    valley_map_from_report,
)
from .completion import CompletionError, complete_peak, complete_peak_conv
from .document import doc_to_lars, doc_to_unlabeled, parse_ars, parse_peak_spec, peak_of
from .errors import DecdiagError, ParseError

app = FastAPI(
    title="decdiag",
    description="Decreasing-diagrams confluence analysis for labeled ARSs",
    version="0.1.0",
)

Mode = Literal["valley", "conv"]
_MODES = {"valley": "valley", "conv": "conversion"}


class DocumentRequest(BaseModel):
    document: str = Field(description="An `.ars` document")


class CheckRequest(DocumentRequest):
    mode: Mode = "valley"


class CompleteRequest(DocumentRequest):
    left: str = Field(description="Alternating object/label path, e.g. s,ls,t,lt,v")
    right: str
    mode: Mode = "valley"
    fuel: Optional[int] = Field(default=None, ge=0)


class FindPrecRequest(DocumentRequest):
    cap: int = Field(default=5, ge=0)


class VerifyRequest(BaseModel):
    certificate: dict


class CheckResponse(BaseModel):
    mode: str
    all_decreasing: bool
    peaks: list


class OracleResponse(BaseModel):
    confluent: bool


class CompleteResponse(BaseModel):
    diagram: dict
    trace: dict


class NewmanResponse(BaseModel):
    ok: bool
    labeling: Optional[dict] = None
    precedence: Optional[list] = None
    certificate: Optional[dict] = None
    error: Optional[str] = None


class FindPrecResponse(BaseModel):
    precedence: Optional[list]


class VerifyResponse(BaseModel):
    valid: bool
    problems: list


def _parse_document(text: str):
    try:
        return parse_ars(text)
    except ParseError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/check", response_model=CheckResponse)
def check(request: CheckRequest) -> dict:
    ars, prec = doc_to_lars(_parse_document(request.document))
    report = check_locally_decreasing(ars, prec, _MODES[request.mode])
    return jsonio.report_to_json(report)


@app.post("/oracle", response_model=OracleResponse)
def oracle(request: DocumentRequest) -> dict:
    doc = _parse_document(request.document)
    return {"confluent": confluent_oracle(doc_to_unlabeled(doc))}


@app.post("/complete", response_model=CompleteResponse)
def complete(request: CompleteRequest) -> dict:
    doc = _parse_document(request.document)
    ars, prec = doc_to_lars(doc)
    try:
        spec = parse_peak_spec(request.left, request.right, doc, ars)
    except ParseError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    mode = _MODES[request.mode]
    report = check_locally_decreasing(ars, prec, mode)
    if not report.all_decreasing:
        raise HTTPException(
            status_code=409,
            detail="ARS is not locally decreasing under the document order",
        )
    try:
        if mode == "valley":
            lcm = valley_map_from_report(ars, prec, report)
            diagram, trace = complete_peak(ars, prec, lcm, peak_of(spec), fuel=request.fuel)
        else:
            lconv = conv_map_from_report(ars, prec, report)
            diagram, trace = complete_peak_conv(
                ars, prec, lconv, peak_of(spec), fuel=request.fuel
            )
    except CompletionError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc
    return {
        "diagram": jsonio.diagram_to_json(diagram),
        "trace": jsonio.trace_to_json(trace),
    }


@app.post("/newman", response_model=NewmanResponse)
def newman(request: DocumentRequest) -> dict:
    doc = _parse_document(request.document)
    try:
        labeled, prec = newman_labeling(doc_to_unlabeled(doc))
    except DecdiagError as exc:
        return {"ok": False, "error": str(exc)}
    cert = certify(labeled, prec, "valley")
    return {
        "ok": True,
        "labeling": {"steps": [list(s) for s in sorted(labeled.steps)]},
        "precedence": jsonio.precedence_to_json(prec),
        "certificate": jsonio.certificate_to_json(cert),
    }


@app.post("/find-prec", response_model=FindPrecResponse)
def find_prec(request: FindPrecRequest) -> dict:
    ars, _ = doc_to_lars(_parse_document(request.document))
    try:
        prec = find_precedence(ars, cap=request.cap)
    except DecdiagError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    if prec is None:
        return {"precedence": None}
    return {"precedence": jsonio.precedence_to_json(prec)}


@app.post("/verify", response_model=VerifyResponse)
def verify(request: VerifyRequest) -> dict:
    try:
        cert = jsonio.certificate_from_json(request.certificate)
    except ParseError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    problems = certificate_problems(cert)
    return {"valid": not problems, "problems": problems}
