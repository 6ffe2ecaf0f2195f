#!/usr/bin/env python3
"""
Cyclic Products Module
Geschlossene Formeln für Produkte zyklischer Erweiterungen: Primgrad-Kriterium
über den gemeinsamen Oberkörper F vom Grad p², Zerlegung nach Primzahlen und
der explizite Isomorphismus f für die p+1 Teilkörper eines C_p × C_p-Körpers
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging

from sympy import factorint, isprime

from core.abelian_q import (
    INFINITY,
    AbelianFieldQ,
    Place,
    as_fraction,
    compositum,
    field_to_dict,
    is_subfield,
    local_degree,
    prime_power_part,
    ramified_primes,
    subfield_of_degree,
    symbol_support,
)
from core.architecture import ComputationLimits, PrimeCaseVerdict, resolve_limits
from core.brauer import hasse_invariant
from core.errors import InvariantViolation, NotCyclic, NotPrimeDegree, WrongShape
from core.sha_core import ShaDecomposition, compute_sha

logger = logging.getLogger(__name__)


@dataclass
class PrimeCaseReport:
    """Ergebnis der geschlossenen Formel für Faktoren vom Primgrad p"""
    p: int
    factors: List[AbelianFieldQ]
    verdict: PrimeCaseVerdict
    overfield: Optional[AbelianFieldQ] = None
    local_degrees: Dict[str, int] = field(default_factory=dict)
    reason: str = ""

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def rank(self) -> int:
        return self.n - 2 if self.verdict == PrimeCaseVerdict.NONZERO else 0

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return (self.p,) * self.rank

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "p": self.p,
            "factors": [field_to_dict(f) for f in self.factors],
            "verdict": self.verdict.value,
            "m": self.rank,
            "reason": self.reason,
        }
        if self.overfield is not None:
            data["certificate"] = {
                "overfield": field_to_dict(self.overfield),
                "local_degrees": dict(self.local_degrees),
            }
        return data


def _dedup(fields: Sequence[AbelianFieldQ]) -> List[AbelianFieldQ]:
    return list(dict.fromkeys(fields))


def _overfield_degrees(F: AbelianFieldQ) -> Dict[str, int]:
    """Lokale Grade von F an den verzweigten Primzahlen und an ∞"""
    degrees = {str(q): local_degree(F, Place(q)) for q in ramified_primes(F)}
    degrees[str(INFINITY)] = local_degree(F, INFINITY)
    return degrees


def sha_prime_case(factors: Sequence[AbelianFieldQ]) -> PrimeCaseReport:
    """
    Ш für ein Produkt zyklischer Körper vom Primgrad p.

    Null für n ≤ 2 und n ≥ p + 2; sonst (Z/pZ)^{n-2} genau dann, wenn alle
    Faktoren in einem Körper F vom Grad p² liegen, dessen lokale Grade ≤ p sind.

    Raises:
        NotPrimeDegree: Grade nicht alle gleich einer Primzahl p
        NotCyclic: ein Faktor ist nicht zyklisch
    """
    if not factors:
        raise WrongShape("Mindestens ein Faktor erforderlich")
    degrees = {f.degree for f in factors}
    if len(degrees) != 1 or not isprime(next(iter(degrees))):
        raise NotPrimeDegree(f"Grade {sorted(degrees)} sind nicht alle dieselbe Primzahl")
    p = degrees.pop()
    for f in factors:
        if not f.is_cyclic():
            raise NotCyclic(f"{f} ist nicht zyklisch")
    distinct = _dedup(factors)
    n = len(distinct)
    if n <= 2:
        return PrimeCaseReport(p, distinct, PrimeCaseVerdict.ZERO, reason="n ≤ 2")
    if n >= p + 2:
        return PrimeCaseReport(p, distinct, PrimeCaseVerdict.ZERO, reason="n ≥ p + 2")
    F = compositum(distinct[0], distinct[1])
    if F.degree != p * p:
        raise InvariantViolation(f"Kompositum zweier verschiedener Grad-{p}-Körper hat Grad {F.degree}")
    if not all(is_subfield(f, F) for f in distinct[2:]):
        return PrimeCaseReport(p, distinct, PrimeCaseVerdict.ZERO, reason="kein gemeinsamer Oberkörper vom Grad p²")
    degrees_F = _overfield_degrees(F)
    if any(d > p for d in degrees_F.values()):
        return PrimeCaseReport(
            p, distinct, PrimeCaseVerdict.ZERO, F, degrees_F, reason="F hat einen lokalen Grad p²"
        )
    report = PrimeCaseReport(p, distinct, PrimeCaseVerdict.NONZERO, F, degrees_F, reason="alle lokalen Grade ≤ p")
    logger.info(f"Primgrad-Fall p={p}: Ш ≅ (Z/{p}Z)^{report.rank}")
    return report


@dataclass
class CyclicProductReport:
    """Ш(L) für ein Produkt zyklischer Körper über beide Rechenwege"""
    primes: List[int]
    prime_cases: Dict[int, PrimeCaseReport]
    zero_reasons: Dict[int, str]
    pipeline: Dict[int, ShaDecomposition]

    @property
    def obstruction_primes(self) -> List[int]:
        """𝒫(L): Primzahlen mit nichttrivialem Primgrad-Fall"""
        return sorted(p for p, r in self.prime_cases.items() if r.verdict == PrimeCaseVerdict.NONZERO)

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return tuple(sorted(x for d in self.pipeline.values() for x in d.invariant_factors))

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def to_dict(self) -> Dict[str, Any]:
        return {
            "invariant_factors": list(self.invariant_factors),
            "obstruction_primes": self.obstruction_primes,
            "prime_cases": {str(p): r.to_dict() for p, r in sorted(self.prime_cases.items())},
            "zero_reasons": {str(p): r for p, r in sorted(self.zero_reasons.items())},
            "components": {str(p): d.to_dict() for p, d in sorted(self.pipeline.items())},
        }


def sha_product_cyclic(
    L: Sequence[AbelianFieldQ],
    limits: Optional[ComputationLimits] = None,
) -> CyclicProductReport:
    """
    Ш(L) = ⊕_p Ш(L(p)) für zyklische Faktoren; Verschwinden über die
    Primgrad-Fälle L(p)_prim, volle Gruppe über die allgemeine Pipeline.
    Beide Wege müssen für jedes p übereinstimmen (null genau dann, wenn null).
    """
    limits = resolve_limits(limits)
    for f in L:
        if not f.is_cyclic():
            raise NotCyclic(f"{f} ist nicht zyklisch")
    primes = sorted({int(q) for f in L for q in factorint(f.degree)})
    report = CyclicProductReport(primes, {}, {}, {})
    for p in primes:
        parts = [prime_power_part(f, p) for f in L]
        if any(part.degree == 1 for part in parts):
            report.zero_reasons[p] = "ein Faktor hat zu p teilerfremden Grad"
            continue
        prim = [subfield_of_degree(part, p) for part in parts]
        case = sha_prime_case(prim)
        report.prime_cases[p] = case
        decomposition = compute_sha(parts, 0, limits)
        report.pipeline[p] = decomposition
        if case.verdict == PrimeCaseVerdict.NONZERO and decomposition.is_trivial:
            raise InvariantViolation(f"p={p}: Primgrad-Fall nichttrivial, Pipeline trivial")
        if case.verdict == PrimeCaseVerdict.ZERO and not decomposition.is_trivial:
            raise InvariantViolation(f"p={p}: Primgrad-Fall trivial, Pipeline {decomposition.invariant_factors}")
    logger.info(f"Produkt zyklischer Körper: Invarianten {list(report.invariant_factors)}, 𝒫 = {report.obstruction_primes}")
    return report


def example_map_f(F: AbelianFieldQ, subfields: Sequence[AbelianFieldQ], c) -> Tuple[int, ...]:
    """
    f(c) ∈ (Z/pZ)^{p-1}: Komponente i ist Σ [K, c]_v über die Stellen des
    Trägers, an denen K_i zerfällt, mit K = K_{p+1} und [K, c]_v = p·inv(K, c)_v.

    Raises:
        WrongShape: F nicht vom Typ C_p × C_p oder Teilkörper unpassend
    """
    c = as_fraction(c)
    primes = factorint(F.degree)
    if len(primes) != 1 or list(primes.values())[0] != 2 or F.is_cyclic():
        raise WrongShape(f"{F} hat keine Galoisgruppe C_p × C_p")
    p = int(next(iter(primes)))
    distinct = _dedup(subfields)
    if len(distinct) != p + 1 or len(subfields) != p + 1:
        raise WrongShape(f"Erwartet {p + 1} verschiedene Teilkörper, erhalten {len(subfields)}")
    for K_i in distinct:
        if K_i.degree != p or not is_subfield(K_i, F):
            raise WrongShape(f"{K_i} ist kein Teilkörper vom Grad {p} von {F}")
    if any(d > p for d in _overfield_degrees(F).values()):
        return tuple(0 for _ in range(p - 1))
    K = subfields[p]
    components = []
    for K_i in subfields[: p - 1]:
        total = Fraction(0)
        for v in symbol_support(F.modulus, c):
            if local_degree(K_i, v) == 1:
                total += hasse_invariant(K, c, v)
        components.append(int(total * p) % p)
    return tuple(components)
