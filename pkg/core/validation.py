#!/usr/bin/env python3
"""
Validation Module
Pydantic-basierte Validierung für Körperbeschreibungen, Profil-Dokumente und CLI-Anfragen
"""

import re
from fractions import Fraction
from typing import Any, Dict, List, Optional
from pydantic import BaseModel, Field, field_validator, model_validator, ValidationError
import logging

from sympy import isprime

from core.errors import FieldSpecError

logger = logging.getLogger(__name__)

FIELD_SPEC_PATTERN = re.compile(
    r"^(?P<kind>quad|cyclo|cyclosub|explicit):(?P<args>[-0-9]+(?::[-0-9,]*)?)$"
)


# Körperbeschreibungen
class FieldSpec(BaseModel):
    """Körperbeschreibung quad:D | cyclo:N | cyclosub:N:d | explicit:N:g1,g2,..."""
    kind: str = Field(..., pattern="^(quad|cyclo|cyclosub|explicit)$", description="Art der Beschreibung")
    radicand: Optional[int] = Field(None, description="D für quad:D")
    modulus: Optional[int] = Field(None, ge=1, description="N für cyclo/cyclosub/explicit")
    degree: Optional[int] = Field(None, ge=1, description="d für cyclosub:N:d")
    generators: List[int] = Field(default_factory=list, description="Erzeuger für explicit")

    @field_validator('radicand')
    @classmethod
    def validate_radicand(cls, v):
        if v == 0:
            raise ValueError("D darf nicht 0 sein")
        return v

    @model_validator(mode='after')
    def validate_arguments(self):
        if self.kind == "quad" and self.radicand is None:
            raise ValueError("quad benötigt D")
        if self.kind != "quad" and self.modulus is None:
            raise ValueError(f"{self.kind} benötigt einen Modul N")
        if self.kind == "cyclosub" and self.degree is None:
            raise ValueError("cyclosub benötigt einen Grad d")
        return self

    def build(self):
        from core.abelian_q import cyclotomic_field, cyclotomic_subfield, explicit_field, quadratic_field

        if self.kind == "quad":
            return quadratic_field(self.radicand)
        if self.kind == "cyclo":
            return cyclotomic_field(self.modulus)
        if self.kind == "cyclosub":
            return cyclotomic_subfield(self.modulus, self.degree)
        return explicit_field(self.modulus, self.generators)


def _tokenize_field_spec(text: str) -> Dict[str, Any]:
    match = FIELD_SPEC_PATTERN.match(text.strip())
    if not match:
        raise FieldSpecError(f"Unbekannte Körperbeschreibung: '{text}'")
    kind = match.group("kind")
    parts = match.group("args").split(":")
    try:
        if kind == "quad":
            if len(parts) != 1:
                raise ValueError
            return {"kind": kind, "radicand": int(parts[0])}
        if kind == "cyclo":
            if len(parts) != 1:
                raise ValueError
            return {"kind": kind, "modulus": int(parts[0])}
        if kind == "cyclosub":
            if len(parts) != 2:
                raise ValueError
            return {"kind": kind, "modulus": int(parts[0]), "degree": int(parts[1])}
        if len(parts) != 2:
            raise ValueError
        generators = [int(g) for g in parts[1].split(",") if g]
        return {"kind": kind, "modulus": int(parts[0]), "generators": generators}
    except ValueError:
        raise FieldSpecError(f"Falsche Argumente in Körperbeschreibung: '{text}'")


def parse_field_spec(text: str):
    """
    Parst eine Körperbeschreibung in einen AbelianFieldQ.

    Raises:
        FieldSpecError: Syntax oder Argumente ungültig
    """
    try:
        spec = FieldSpec(**_tokenize_field_spec(text))
    except ValidationError as e:
        raise FieldSpecError(f"Ungültige Körperbeschreibung '{text}'", {"errors": format_validation_error(e)})
    field = spec.build()
    logger.debug(f"Körper '{text}' -> {field}")
    return field


# Profil-Dokumente
class ProfileClass(BaseModel):
    """Eine Stellenklasse im Profil-Dokument"""
    kind: str = Field(..., pattern="^(frob|prime|infty)$", description="Art der Stellenklasse")
    value: Optional[int] = Field(None, description="Residuum bzw. Primzahl, null für ∞")
    exponents: List[int] = Field(..., description="Exponenten e_{i,v} in sortierter Reihenfolge")
    pivot_exp: int = Field(..., ge=0, description="Lokaler Exponent des Pivots")

    @field_validator('exponents')
    @classmethod
    def validate_exponents(cls, v):
        if any(x < 0 for x in v):
            raise ValueError("Exponenten müssen nichtnegativ sein")
        return v

    @model_validator(mode='after')
    def validate_value(self):
        if self.kind == "infty" and self.value is not None:
            raise ValueError("∞-Klasse hat keinen Wert")
        if self.kind != "infty" and self.value is None:
            raise ValueError(f"Klasse '{self.kind}' benötigt einen Wert")
        if self.kind == "prime" and not isprime(self.value):
            raise ValueError(f"{self.value} ist keine Primzahl")
        return self


class ProfileDocument(BaseModel):
    """Exportiertes Splitting-Profil"""
    p: int = Field(..., ge=2, description="Primzahl p")
    e: int = Field(..., ge=1, description="Exponent des Pivot-Grads p^e")
    exps: List[int] = Field(..., description="Exponenten e_1 ≥ ... ≥ e_m")
    factor_order: Optional[List[int]] = Field(None, description="Sortierte Position -> ursprünglicher Index")
    granularity: str = Field(default="residue", pattern="^(residue|galois|auto)$", description="Klassenbildung")
    classes: List[ProfileClass] = Field(..., min_length=1, description="Stellenklassen")

    @field_validator('p')
    @classmethod
    def validate_p(cls, v):
        if not isprime(v):
            raise ValueError(f"p = {v} ist keine Primzahl")
        return v

    @field_validator('exps')
    @classmethod
    def validate_exps(cls, v):
        if any(x < 0 for x in v):
            raise ValueError("Exponenten müssen nichtnegativ sein")
        if any(a < b for a, b in zip(v, v[1:])):
            raise ValueError("Exponenten müssen absteigend sortiert sein")
        return v

    @model_validator(mode='after')
    def validate_profile(self):
        m = len(self.exps)
        if self.factor_order is not None and sorted(self.factor_order) != list(range(m)):
            raise ValueError(f"factor_order ist keine Permutation von 0..{m - 1}")
        if any(x > self.e for x in self.exps):
            raise ValueError("Kein e_i darf e überschreiten")
        seen = set()
        infinite = 0
        for index, cls in enumerate(self.classes):
            key = (cls.kind, cls.value)
            if key in seen:
                raise ValueError(f"Klasse {index}: doppelte Klasse {cls.kind}:{cls.value}")
            seen.add(key)
            infinite += cls.kind == "infty"
            if len(cls.exponents) != m:
                raise ValueError(f"Klasse {index}: {len(cls.exponents)} Exponenten, erwartet {m}")
            for i, (x, bound) in enumerate(zip(cls.exponents, self.exps)):
                if x > bound:
                    raise ValueError(f"Klasse {index}: e_{{{i},v}} = {x} > e_{i} = {bound}")
            if cls.pivot_exp > self.e:
                raise ValueError(f"Klasse {index}: pivot_exp {cls.pivot_exp} > e = {self.e}")
        if infinite > 1:
            raise ValueError("Höchstens eine ∞-Klasse erlaubt")
        return self


# CLI-Anfragen
def parse_rational(text: str) -> Fraction:
    """Liest c als 'num/den' oder ganze Zahl"""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"'{text}' ist keine rationale Zahl num/den")
    return value


class ComputationRequest(BaseModel):
    """Gemeinsame Parameter der Unterbefehle"""
    factors: List[str] = Field(..., min_length=1, description="Körperbeschreibungen")
    pivot: Optional[int] = Field(None, ge=0, description="Index des Pivots (0-basiert)")

    @model_validator(mode='after')
    def validate_pivot(self):
        if self.pivot is not None and self.pivot >= len(self.factors):
            raise ValueError(f"Pivot {self.pivot} außerhalb von 0..{len(self.factors) - 1}")
        return self


class DecideRequest(ComputationRequest):
    """Anfrage für decide"""
    c: str = Field(..., min_length=1, description="c als num/den")

    @field_validator('c')
    @classmethod
    def validate_c(cls, v):
        if parse_rational(v) == 0:
            raise ValueError("c darf nicht 0 sein")
        return v

    @property
    def value(self) -> Fraction:
        return parse_rational(self.c)


class KnotRequest(ComputationRequest):
    """Anfrage für knot"""
    bound: int = Field(default=30, ge=1, le=10**6, description="Höhenschranke der Suche")


class ValidationResult(BaseModel):
    """Validierungsergebnis"""
    valid: bool = Field(..., description="Gültig oder nicht")
    errors: List[str] = Field(default_factory=list, description="Validierungsfehler")
    warnings: List[str] = Field(default_factory=list, description="Warnungen")
    data: Optional[Dict[str, Any]] = Field(None, description="Validierte Daten")


def format_validation_error(error: ValidationError) -> List[str]:
    """Wandelt einen ValidationError in 'feld: meldung'-Zeilen"""
    messages = []
    for item in error.errors():
        location = " -> ".join(str(part) for part in item['loc']) if item['loc'] else 'dokument'
        messages.append(f"{location}: {item['msg']}")
    return messages


def validate_profile_document(data: Dict[str, Any]) -> ValidationResult:
    """
    Validiert ein Profil-Dokument ohne es zu importieren

    Args:
        data: Profil als Dictionary

    Returns:
        ValidationResult mit Ergebnis
    """
    if not isinstance(data, dict):
        return ValidationResult(valid=False, errors=["Profil muss ein Dictionary sein"])
    try:
        document = ProfileDocument(**data)
    except ValidationError as e:
        return ValidationResult(valid=False, errors=format_validation_error(e), data=data)
    warnings = []
    if not any(c.kind == "infty" for c in document.classes):
        warnings.append("Profil ohne ∞-Klasse")
    return ValidationResult(valid=True, warnings=warnings, data=data)
