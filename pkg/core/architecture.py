#!/usr/bin/env python3
"""
Architecture Module
Gemeinsame Typen, Enums und Rechengrenzen für den Hasse-Prinzip-Rechner
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple
import logging

logger = logging.getLogger(__name__)


class PlaceKind(str, Enum):
    """Art einer Stellenklasse"""
    FROBENIUS = "frob"
    PRIME = "prime"
    INFINITY = "infty"


class Granularity(str, Enum):
    """Feinheit der Stellenklassen eines Profils"""
    RESIDUE = "residue"
    GALOIS = "galois"
    AUTO = "auto"


class VerdictKind(str, Enum):
    """Ergebnis der Lösbarkeitsentscheidung"""
    SOLVABLE = "solvable"
    OBSTRUCTED = "obstructed"
    NO_LOCAL = "no_local"


class PrimeCaseVerdict(str, Enum):
    """Ergebnis der geschlossenen Formel im Primgrad-Fall"""
    ZERO = "zero"
    NONZERO = "nonzero"


# Exit-Codes der CLI
EXIT_OK = 0
EXIT_ERROR = 2
EXIT_OBSTRUCTED = 3
EXIT_NO_LOCAL = 4

VERDICT_EXIT_CODES: Dict[VerdictKind, int] = {
    VerdictKind.SOLVABLE: EXIT_OK,
    VerdictKind.OBSTRUCTED: EXIT_OBSTRUCTED,
    VerdictKind.NO_LOCAL: EXIT_NO_LOCAL,
}


@dataclass(frozen=True)
class ComputationLimits:
    """
    Obergrenzen für die aufwendigen Schritte.

    modulus: maximale Anzahl Einheiten mod N für Profile pro Restklasse
    ambient: maximale Größe von ⊕ Z/p^{e_i}Z bei der Aufzählung von G
    galois: maximale Ordnung der Galoisgruppe des Kompositums
    """
    modulus: int = 10 ** 6
    ambient: int = 10 ** 7
    galois: int = 10 ** 7
    granularity: Granularity = Granularity.AUTO
    max_workers: int = 1


DEFAULT_LIMITS = ComputationLimits()


def resolve_limits(limits: Optional[ComputationLimits]) -> ComputationLimits:
    """Übergebene Grenzen oder die Standardgrenzen"""
    return limits if limits is not None else DEFAULT_LIMITS


def fraction_pair(value: Fraction) -> List[str]:
    """Bruch als [zähler, nenner] im JSON-Format"""
    return [str(value.numerator), str(value.denominator)]


@dataclass
class KnotRepresentative:
    """Ein Vertreter der Knotengruppe mit seinem Charakter"""
    c: Fraction
    character: Tuple[Fraction, ...]
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """c als String, Charakter als Bruchpaare"""
        return {
            "c": str(self.c),
            "character": [fraction_pair(x) for x in self.character],
        }


@dataclass
class KnotScanResult:
    """Ergebnis eines Knotengruppen-Scans"""
    representatives: List[KnotRepresentative]
    complete: bool
    scanned: int
    group_order: int
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-Form des Scans ohne Metadaten"""
        return {
            "representatives": [r.to_dict() for r in self.representatives],
            "complete": self.complete,
            "scanned": self.scanned,
            "group_order": self.group_order,
        }
