#!/usr/bin/env python3
"""
Errors Module
Fehlerhierarchie für Körperarithmetik, Profile, Ш-Berechnung und Entscheidung
"""

from typing import Any, Dict, List, Optional


class HasseError(Exception):
    """Basisklasse aller fachlichen Fehler"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details or {}

    @property
    def kind(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.kind, "message": self.message, "details": self.details}


class FieldSpecError(HasseError):
    """Körperbeschreibung nicht lesbar"""


class NonCyclic(HasseError):
    """Galoisgruppe ist nicht zyklisch"""


class BadDegree(HasseError):
    """Grad passt nicht zum Körper"""


class ZeroInput(HasseError):
    """c = 0 ist nicht zulässig"""


class ModulusTooLarge(HasseError):
    """Zu viele Einheiten mod N für ein Profil"""


class MalformedProfile(HasseError):
    """Importiertes Profil verletzt Schema oder Invarianten"""

    def __init__(self, message: str, diagnostics: Optional[List[str]] = None) -> None:
        super().__init__(message, {"diagnostics": list(diagnostics or [])})
        self.diagnostics: List[str] = list(diagnostics or [])


class NotCoherent(HasseError):
    """Tupel von Indexmengen ist nicht kohärent"""


class AmbientTooLarge(HasseError):
    """⊕ Z/p^{e_i}Z ist zu groß für die Aufzählung"""


class NoCyclicFactor(HasseError):
    """Der gewählte Pivot-Faktor ist nicht zyklisch"""


class WrongExponent(HasseError):
    """Operation nur für Exponent e = 1 definiert"""


class NotLocallySolvable(HasseError):
    """Gleichung an einer Stelle lokal unlösbar"""

    def __init__(self, message: str, witness: Any) -> None:
        super().__init__(message, {"witness": str(witness)})
        self.witness = witness


class NotPrimeDegree(HasseError):
    """Faktor hat keinen Primzahlgrad p"""


class NotCyclic(HasseError):
    """Faktor ist nicht zyklisch"""


class WrongShape(HasseError):
    """Eingabe hat nicht die erwartete Gestalt"""


class UnsupportedDegree(HasseError):
    """Suche nur für Q, quadratische und biquadratische Faktoren"""


class Mismatch(HasseError):
    """Profil stimmt an einer echten Primzahl nicht"""

    def __init__(self, message: str, prime: int) -> None:
        super().__init__(message, {"prime": prime})
        self.prime = prime


class InvariantViolation(HasseError):
    """Interne Selbstprüfung fehlgeschlagen"""


class SearchSpaceTooLarge(HasseError):
    """Zu viele Kandidaten für die erschöpfende Lösungssuche"""
