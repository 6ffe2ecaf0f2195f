#!/usr/bin/env python3
"""
Brauer Module
Hasse-Invarianten zyklischer Algebren (K, c), lokale Lösbarkeit der
Multinormgleichung, Brauer-Manin-Charakter α_c, Entscheidung und Knotengruppe
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple
import logging

from core.abelian_q import AbelianFieldQ, Place, as_fraction, local_artin_symbol, symbol_support
from core.architecture import (
    ComputationLimits,
    KnotRepresentative,
    KnotScanResult,
    VerdictKind,
    fraction_pair,
)
from core.errors import InvariantViolation, NonCyclic, NotLocallySolvable, ZeroInput
from core.sha_core import ShaDecomposition, ShaGroup, TupleVec, compute_sha, covering_values
from core.splitting import Context, GaloisFrame, place_exponents

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Hasse-Invarianten
# ---------------------------------------------------------------------------

def hasse_invariant(K: AbelianFieldQ, c, v: Place) -> Fraction:
    """
    inv(K, c)_v = j/d, wobei das lokale Artin-Symbol in Gal(K/Q) gleich g^j ist
    (g = kleinster erzeugender Vertreter).
    """
    c = as_fraction(c)
    if c == 0:
        raise ZeroInput("c = 0 ist nicht zulässig")
    if not K.is_cyclic():
        raise NonCyclic(f"{K} ist nicht zyklisch")
    t = local_artin_symbol(K.modulus, v, c)
    return Fraction(K.galois_log(t), K.degree) % 1


@dataclass
class InvariantLedger:
    """Lokale Invarianten von (K, c) auf dem endlichen Träger"""
    cyclic_field: AbelianFieldQ
    c: Fraction
    entries: Dict[Place, Fraction]

    @property
    def total(self) -> Fraction:
        return sum(self.entries.values(), Fraction(0)) % 1

    def nonzero(self) -> Dict[Place, Fraction]:
        return {v: x for v, x in self.entries.items() if x != 0}

    def check(self) -> None:
        if self.total != 0:
            raise InvariantViolation(
                f"Summe der Invarianten von ({self.cyclic_field}, {self.c}) ist {self.total}, nicht 0"
            )

    def to_dict(self) -> Dict[str, Any]:
        return {str(v): fraction_pair(x) for v, x in self.entries.items()}


def invariant_ledger(K: AbelianFieldQ, c) -> InvariantLedger:
    """Alle Invarianten auf {p | N} ∪ {p | c} ∪ {∞}; Summe 0 wird erzwungen"""
    c = as_fraction(c)
    if c == 0:
        raise ZeroInput("c = 0 ist nicht zulässig")
    entries = {v: hasse_invariant(K, c, v) for v in symbol_support(K.modulus, c)}
    ledger = InvariantLedger(K, c, entries)
    ledger.check()
    return ledger


# ---------------------------------------------------------------------------
# Lokale Lösbarkeit
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _frame(L: Tuple[AbelianFieldQ, ...]) -> GaloisFrame:
    return GaloisFrame(L)


def locally_solvable(L: Sequence[AbelianFieldQ], c, v: Place) -> bool:
    """Artin-Symbol von c an v liegt in ⟨D_v ∩ H_j : j⟩"""
    c = as_fraction(c)
    if c == 0:
        raise ZeroInput("c = 0 ist nicht zulässig")
    frame = _frame(tuple(L))
    t = local_artin_symbol(frame.modulus, v, c)
    D = frame.decomposition(v)
    norms = frame.closure(g for j in range(len(L)) for g in frame.kernel(D, j))
    return frame.signature(t) in norms


def locally_solvable_everywhere(L: Sequence[AbelianFieldQ], c) -> Tuple[bool, Optional[Place]]:
    """Prüft den endlichen Träger; gibt die erste verletzte Stelle als Zeugen zurück"""
    c = as_fraction(c)
    if c == 0:
        raise ZeroInput("c = 0 ist nicht zulässig")
    frame = _frame(tuple(L))
    for v in symbol_support(frame.modulus, c):
        if not locally_solvable(L, c, v):
            logger.debug(f"c = {c} lokal unlösbar an {v}")
            return False, v
    return True, None


# ---------------------------------------------------------------------------
# Brauer-Manin-Charakter
# ---------------------------------------------------------------------------

@dataclass
class ComponentCharacter:
    """α_c(p) auf der Basis von Ш(K(p), K')"""
    p: int
    group: ShaGroup
    generator_values: Tuple[Fraction, ...]
    ledger: Optional[InvariantLedger] = None
    context: Optional[Context] = field(default=None, repr=False)
    place_exponents: Dict[Place, Tuple[int, ...]] = field(default_factory=dict, repr=False)

    def evaluate(self, a: Sequence[int], choice: str = "smallest") -> Fraction:
        """Wert auf einem beliebigen Element von G (sortierte Koordinaten)"""
        if self.ledger is None or self.context is None:
            return Fraction(0)
        return _character_value(self.context, self.ledger, self.place_exponents, tuple(a), choice)


@dataclass
class Obstruction:
    """Brauer-Manin-Charakter α_c auf Ш(L)"""
    c: Fraction
    components: Dict[int, ComponentCharacter]

    @property
    def values(self) -> Tuple[Fraction, ...]:
        return tuple(x for p in sorted(self.components) for x in self.components[p].generator_values)

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for x in self.values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            str(p): {"generator_values": [fraction_pair(x) for x in component.generator_values]}
            for p, component in sorted(self.components.items())
        }


def _character_value(
    ctx: Context,
    ledger: InvariantLedger,
    exponents_at: Dict[Place, Tuple[int, ...]],
    a: TupleVec,
    choice: str,
) -> Fraction:
    """Σ_v n(v)·inv(K, c)_v mit n(v) kleinster bzw. größter überdeckender Wert"""
    top = ctx.p ** ctx.exps[0]
    total = Fraction(0)
    for v, inv in ledger.nonzero().items():
        if (inv * top).denominator != 1:
            raise InvariantViolation(f"inv_{v} = {inv} hat Nenner größer als p^e_1 = {top}")
        exponents = exponents_at.get(v)
        if exponents is None:
            exponents = exponents_at[v] = place_exponents(ctx, v)[0]
        values = covering_values(ctx.p, ctx.exps, a, exponents)
        if not values:
            raise InvariantViolation(f"{a} wird an {v} nicht überdeckt, liegt also nicht in G")
        n = values[0] if choice == "smallest" else values[-1]
        total += n * inv
    return total % 1


def alpha(
    L: Sequence[AbelianFieldQ],
    pivot: int,
    c,
    sha: Optional[ShaDecomposition] = None,
    limits: Optional[ComputationLimits] = None,
) -> Obstruction:
    """
    α_c auf der Basis jeder Komponente Ш(K(p), K').

    Raises:
        NotLocallySolvable: c an einer Stelle kein lokales Multinorm
    """
    c = as_fraction(c)
    solvable, witness = locally_solvable_everywhere(L, c)
    if not solvable:
        raise NotLocallySolvable(f"c = {c} ist an {witness} nicht lokal lösbar", witness)
    if sha is None:
        sha = compute_sha(L, pivot, limits)
    components: Dict[int, ComponentCharacter] = {}
    for p, group in sorted(sha.components.items()):
        if group.is_trivial:
            components[p] = ComponentCharacter(p, group, ())
            continue
        ctx = sha.contexts[p]
        ledger = invariant_ledger(ctx.pivot, c)
        exponents_at: Dict[Place, Tuple[int, ...]] = {}
        values = []
        for b in group.basis:
            smallest = _character_value(ctx, ledger, exponents_at, b, "smallest")
            largest = _character_value(ctx, ledger, exponents_at, b, "largest")
            if smallest != largest:
                raise InvariantViolation(
                    f"α_c hängt von der Wahl von n(v) ab: {smallest} ≠ {largest} auf {b}"
                )
            values.append(smallest)
        components[p] = ComponentCharacter(p, group, tuple(values), ledger, ctx, exponents_at)
    obstruction = Obstruction(c, components)
    logger.debug(f"α_{c} = {[str(x) for x in obstruction.values]}")
    return obstruction


# ---------------------------------------------------------------------------
# Entscheidung
# ---------------------------------------------------------------------------

@dataclass
class Verdict:
    """Lösbar, obstruiert oder lokal unlösbar"""
    kind: VerdictKind
    c: Fraction
    witness: Optional[Place] = None
    obstruction: Optional[Obstruction] = None
    sha: Optional[ShaDecomposition] = field(default=None, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.kind.value,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "alpha": self.obstruction.to_dict() if self.obstruction is not None else {},
        }


def decide(
    L: Sequence[AbelianFieldQ],
    pivot: int,
    c,
    limits: Optional[ComputationLimits] = None,
    sha: Optional[ShaDecomposition] = None,
) -> Verdict:
    """Lösbar genau dann, wenn überall lokal lösbar und α_c = 0"""
    c = as_fraction(c)
    if c == 0:
        raise ZeroInput("c = 0 ist nicht zulässig")
    solvable, witness = locally_solvable_everywhere(L, c)
    if not solvable:
        logger.info(f"c = {c}: keine lokale Lösung an {witness}")
        return Verdict(VerdictKind.NO_LOCAL, c, witness=witness)
    if sha is None:
        sha = compute_sha(L, pivot, limits)
    obstruction = alpha(L, pivot, c, sha, limits)
    kind = VerdictKind.SOLVABLE if obstruction.is_zero else VerdictKind.OBSTRUCTED
    logger.info(f"c = {c}: {kind.value}")
    return Verdict(kind, c, obstruction=obstruction, sha=sha)


# ---------------------------------------------------------------------------
# Knotengruppe
# ---------------------------------------------------------------------------

def rationals_by_height(bound: int) -> Iterator[Fraction]:
    """Rationale Zahlen nach Höhe max(|z|, n), positive vor negativen, dann nach Wert"""
    for h in range(1, bound + 1):
        positives = sorted(
            {Fraction(a, b) for a in range(1, h + 1) for b in range(1, h + 1) if max(a, b) == h and gcd(a, b) == 1}
        )
        yield from positives
        yield from (-x for x in positives)


def _span_with(span: set, character: Tuple[Fraction, ...]) -> set:
    extended = set(span)
    multiple = character
    while True:
        added = {tuple((x + y) % 1 for x, y in zip(s, multiple)) for s in span}
        if added <= extended:
            break
        extended |= added
        multiple = tuple((x + y) % 1 for x, y in zip(multiple, character))
    return extended


def knot_group(
    L: Sequence[AbelianFieldQ],
    pivot: int,
    bound: int,
    limits: Optional[ComputationLimits] = None,
) -> KnotScanResult:
    """
    Sucht c bis zur Höhe bound, die überall lokal lösbar sind, und wählt eine
    minimale Menge, deren Charaktere die duale Gruppe von Ш(L) erzeugen.
    """
    sha = compute_sha(L, pivot, limits)
    if sha.is_trivial:
        return KnotScanResult([], True, 0, 1)
    size = len(sha.invariant_factors)
    zero = tuple(Fraction(0) for _ in range(size))
    span = {zero}
    representatives: List[KnotRepresentative] = []
    scanned = 0
    for c in rationals_by_height(bound):
        scanned += 1
        if not locally_solvable_everywhere(L, c)[0]:
            continue
        character = alpha(L, pivot, c, sha, limits).values
        if character in span:
            continue
        representatives.append(KnotRepresentative(c, character))
        span = _span_with(span, character)
        if len(span) == sha.order:
            logger.info(f"Knotengruppe vollständig nach {scanned} Kandidaten")
            return KnotScanResult(representatives, True, scanned, sha.order)
    logger.warning(
        f"Knotengruppe nur teilweise erzeugt ({len(span)} von {sha.order}) bis Höhe {bound}"
    )
    return KnotScanResult(representatives, False, scanned, sha.order)
