"""Machine-readable (JSON) and human-readable report documents.

Exact values are encoded as strings: rationals as ``p`` or ``p/q`` and
rational functions in the model-file expression syntax, so every document
parses back to the same data.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .casimir import CasimirCertificate
from .expr import ChartContext, RationalFunction
from .pencil_point import CanonicalBasisChange, GenericityCertificate
from .poisson import BracketCheck
from .tensor import OneFormField, VolumeForm
from .unimod import FlatnessReport

SCHEMA_VERSION = 1


@dataclass
class ReportDocument:
    command: str
    result: Dict[str, Any]
    model: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = 0
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "exit_code": self.exit_code,
            "model": self.model,
            "result": self.result,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ReportDocument":
        if "schema_version" not in data:
            raise ValueError("report document without schema_version")
        return cls(command=data["command"], result=data["result"], model=data.get("model", {}),
                   exit_code=data.get("exit_code", 0), schema_version=data["schema_version"])

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls.from_dict(json.loads(text))


# -- encoders -----------------------------------------------------------------

def q(x) -> str:
    return str(Fraction(x))


def rf(chart: ChartContext, r: RationalFunction) -> str:
    return chart.format(r)


def one_form(form: OneFormField) -> List[str]:
    return [rf(form.chart, c) for c in form]


def bracket_check(chart: ChartContext, check: Optional[BracketCheck]) -> Optional[Dict[str, Any]]:
    if check is None:
        return None
    witness = None
    if check.witness is not None:
        (i, j, k), value = check.witness
        witness = {"indices": [i + 1, j + 1, k + 1], "value": rf(chart, value)}
    return {"ok": check.ok, "witness": witness}


def genericity(cert: Optional[GenericityCertificate]) -> Optional[Dict[str, Any]]:
    if cert is None:
        return None
    return {
        "verdict": cert.verdict,
        "point": [q(x) for x in cert.point],
        "deleted_pfaffians": [[q(c) for c in p] for p in cert.deleted_pfaffians],
        "gcd_finite": [q(c) for c in cert.gcd_finite],
        "infinity_ok": cert.infinity_ok,
    }


def volume(vol: Optional[VolumeForm]) -> Optional[Dict[str, Any]]:
    if vol is None:
        return None
    chart = vol.chart
    dens = vol.explicit_density
    explicit = None
    if dens is not None:
        explicit = {
            "rational_part": rf(chart, dens.rational_part),
            "log_terms": [{"base": p.format(chart.coordinate_names), "exponent": q(c)} for p, c in dens.log_terms],
            "display": dens.format(chart),
        }
    return {"log_derivative": one_form(vol.log_derivative), "explicit_density": explicit}


def flatness(report: FlatnessReport) -> Dict[str, Any]:
    chart = report.chart
    inc = None
    if report.inconsistency_witness is not None:
        row, value = report.inconsistency_witness
        inc = {"row": row + 1, "value": rf(chart, value)}
    closed = None
    if report.closedness_witness is not None:
        i, j, value = report.closedness_witness
        closed = {"indices": [i + 1, j + 1], "value": rf(chart, value)}
    return {
        "verdict": report.verdict,
        "point": [q(x) for x in report.point],
        "poisson_P": bracket_check(chart, report.poisson_P),
        "poisson_Q": bracket_check(chart, report.poisson_Q),
        "compatibility": bracket_check(chart, report.compatibility),
        "genericity": genericity(report.genericity),
        "solve_status": report.solve_status,
        "inconsistency_witness": inc,
        "alpha": one_form(report.alpha) if report.alpha is not None else None,
        "closed": None if report.alpha is None else report.closedness_witness is None,
        "closedness_witness": closed,
        "volume": volume(report.volume),
        "notes": list(report.notes),
    }


def casimir(cert: CasimirCertificate) -> Dict[str, Any]:
    form = cert.form
    return {
        "valid": cert.valid,
        "kernel_ok": cert.kernel_ok,
        "closed_ok": cert.closed_ok,
        "nonvanishing_ok": cert.nonvanishing_ok,
        "degree": cert.degree,
        "point": [q(x) for x in cert.point],
        "samples": [q(x) for x in cert.samples],
        "coefficients": [one_form(c) for c in form.coefficients],
        "density": volume(form.volume),
    }


def jk(change: CanonicalBasisChange) -> Dict[str, Any]:
    return {"T": [[q(x) for x in row] for row in change.T], "attempts": change.attempts}


# -- decoders -----------------------------------------------------------------

def decode_rational(text: str) -> Fraction:
    return Fraction(text)


def decode_rf(chart: ChartContext, text: str) -> RationalFunction:
    return chart.parse(text)


# -- human rendering ----------------------------------------------------------

def render_human(doc: ReportDocument) -> str:
    lines = [f"{doc.command}: exit code {doc.exit_code}"]
    if doc.model:
        name = doc.model.get("name") or "(unnamed)"
        lines.append(f"model: {name}, dim {doc.model.get('dim')}, coords {', '.join(doc.model.get('coords', []))}")
    _render(doc.result, lines, 0)
    return "\n".join(lines)


def _render(value, lines: List[str], depth: int, key: Optional[str] = None):
    pad = "  " * depth
    label = f"{pad}{key}: " if key is not None else pad
    if isinstance(value, dict):
        if key is not None:
            lines.append(f"{pad}{key}:")
        for k, v in value.items():
            if v is None or v == [] or v == {}:
                continue
            _render(v, lines, depth + (1 if key is not None else 0), k)
    elif isinstance(value, list) and all(not isinstance(v, (dict, list)) for v in value):
        lines.append(label + "[" + ", ".join(str(v) for v in value) + "]")
    elif isinstance(value, list):
        lines.append(f"{pad}{key}:")
        for k, v in enumerate(value):
            _render(v, lines, depth + 1, f"[{k}]")
    else:
        lines.append(label + str(value).lower() if isinstance(value, bool) else label + str(value))
