#!/usr/bin/env python3
"""
Abelian Q Module
Abelsche Erweiterungen von Q als Paar (Führer N, Untergruppe H ≤ (Z/NZ)^×),
Zerlegungsgruppen an allen Stellen und das lokale Artin-Symbol für Q(ζ_N)
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple, TypeVar
import logging

from sympy import divisors, factorint, isprime, jacobi_symbol, multiplicity, primitive_root, totient
from sympy.ntheory.modular import crt

from core.errors import BadDegree, FieldSpecError, NonCyclic, ZeroInput

logger = logging.getLogger(__name__)

T = TypeVar("T", bound=Hashable)


# ---------------------------------------------------------------------------
# Gruppen-Hilfsfunktionen
# ---------------------------------------------------------------------------

def generate_subgroup(generators: Iterable[T], identity: T, mul: Callable[[T, T], T]) -> FrozenSet[T]:
    """
    Abschluss einer Erzeugermenge in einer endlichen Gruppe (Breitensuche)

    Args:
        generators: Erzeuger
        identity: neutrales Element
        mul: Gruppenverknüpfung

    Returns:
        Menge aller Elemente der erzeugten Untergruppe
    """
    gens = list(dict.fromkeys(generators))
    elements = {identity}
    frontier = [identity]
    while frontier:
        next_frontier = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in elements:
                    elements.add(y)
                    next_frontier.append(y)
        frontier = next_frontier
    return frozenset(elements)


def residue_closure(modulus: int, generators: Iterable[int]) -> FrozenSet[int]:
    """Untergruppe von (Z/NZ)^× erzeugt von den gegebenen Restklassen"""
    return generate_subgroup(
        (g % modulus for g in generators), 1 % modulus, lambda a, b: a * b % modulus
    )


def greedy_generators(elements: Iterable[int], modulus: int) -> Tuple[int, ...]:
    """Deterministische Erzeuger: aufsteigend jedes Element, das noch nicht erzeugt wird"""
    span = {1 % modulus}
    gens: List[int] = []
    for x in sorted(elements):
        if x not in span:
            gens.append(x)
            span = set(residue_closure(modulus, gens))
    return tuple(gens)


def units(modulus: int) -> List[int]:
    """Einheiten mod N als Restklassen in [0, N)"""
    return [x for x in range(modulus) if gcd(x, modulus) == 1]


def frobenius_classes(modulus: int) -> List[int]:
    """Alle Frobenius-Klassen mod N, d.h. die Elemente von (Z/NZ)^×"""
    if modulus == 1:
        return [1]
    return units(modulus)


def prime_power_unit_generators(q: int, a: int) -> List[int]:
    """Erzeuger von (Z/q^aZ)^×"""
    n = q ** a
    if a == 0 or n == 2:
        return []
    if q != 2:
        return [int(primitive_root(n))]
    if n == 4:
        return [3]
    return [n - 1, 5]


def crt_lift(residues: Sequence[int], moduli: Sequence[int]) -> int:
    """Chinesischer Restsatz, Moduln 1 werden ignoriert"""
    pairs = [(r % m, m) for r, m in zip(residues, moduli) if m > 1]
    if not pairs:
        return 0
    result = crt([m for _, m in pairs], [r for r, _ in pairs])
    return int(result[0])


def _split_prime(modulus: int, q: int) -> Tuple[int, int]:
    """N = q^a · m mit q ∤ m, gibt (q^a, m) zurück"""
    qa = q ** int(multiplicity(q, modulus)) if modulus > 1 else 1
    return qa, modulus // qa


def unit_group_generators(modulus: int) -> List[int]:
    """Erzeuger von (Z/NZ)^× über die Primpotenz-Blöcke"""
    gens: List[int] = []
    for q, a in sorted(factorint(modulus).items()):
        qa, rest = q ** a, modulus // q ** a
        for g in prime_power_unit_generators(q, a):
            gens.append(crt_lift([g, 1], [qa, rest]))
    return gens or [1 % modulus]


# ---------------------------------------------------------------------------
# Datentypen
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Place:
    """Stelle von Q: None steht für die unendliche Stelle"""
    prime: Optional[int] = None

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @classmethod
    def finite(cls, p: int) -> "Place":
        if p < 2 or not isprime(p):
            raise FieldSpecError(f"Keine Primzahl: {p}")
        return cls(int(p))

    @property
    def is_infinite(self) -> bool:
        return self.prime is None

    def sort_key(self) -> Tuple[int, int]:
        return (1, 0) if self.prime is None else (0, self.prime)

    def to_json(self):
        return "infty" if self.prime is None else self.prime

    def __str__(self) -> str:
        return "∞" if self.prime is None else str(self.prime)


INFINITY = Place.infinity()


@dataclass(frozen=True)
class GaloisSubgroup:
    """Untergruppe von (Z/NZ)^× gegeben durch Erzeuger"""
    modulus: int
    generators: Tuple[int, ...]

    @cached_property
    def elements(self) -> FrozenSet[int]:
        return residue_closure(self.modulus, self.generators)

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, x: int) -> bool:
        return x % self.modulus in self.elements


@dataclass(frozen=True)
class AbelianFieldQ:
    """
    Abelscher Zahlkörper K ⊆ Q(ζ_N), Fixkörper der Untergruppe H ≤ (Z/NZ)^×.

    subgroup enthält deterministisch gewählte Erzeuger, damit gleiche
    Untergruppen gleiche Darstellungen haben.
    """
    modulus: int
    subgroup: Tuple[int, ...]

    @classmethod
    def from_generators(cls, modulus: int, generators: Iterable[int]) -> "AbelianFieldQ":
        if modulus < 1:
            raise FieldSpecError(f"Modul muss positiv sein: {modulus}")
        gens = [int(g) % modulus for g in generators]
        for g in gens:
            if gcd(g, modulus) != 1:
                raise FieldSpecError(f"Erzeuger {g} ist keine Einheit mod {modulus}")
        elements = residue_closure(modulus, gens)
        return cls(modulus, greedy_generators(elements, modulus))

    @cached_property
    def elements(self) -> FrozenSet[int]:
        return residue_closure(self.modulus, self.subgroup)

    @cached_property
    def degree(self) -> int:
        return int(totient(self.modulus)) // len(self.elements)

    @cached_property
    def coset_labels(self) -> Dict[int, int]:
        """Einheit -> kleinster Vertreter ihrer Nebenklasse x·H"""
        n = self.modulus
        labels: Dict[int, int] = {}
        for x in units(n):
            if x in labels:
                continue
            for h in self.elements:
                labels[x * h % n] = x
        return labels

    def label(self, x: int) -> int:
        return self.coset_labels[x % self.modulus]

    def contains(self, x: int) -> bool:
        return x % self.modulus in self.elements

    def quotient_order(self, x: int) -> int:
        """Ordnung von x·H in (Z/NZ)^×/H"""
        n = self.modulus
        x %= n
        y, k = x, 1
        while y not in self.elements:
            y = y * x % n
            k += 1
        return k

    @cached_property
    def _generator(self) -> Optional[int]:
        d = self.degree
        for x in sorted(set(self.coset_labels.values())):
            if self.quotient_order(x) == d:
                return x
        return None

    def is_cyclic(self) -> bool:
        return self._generator is not None

    def quotient_generator(self) -> int:
        """Kleinster Vertreter, der (Z/NZ)^×/H erzeugt"""
        if self._generator is None:
            raise NonCyclic(f"Galoisgruppe von {self} ist nicht zyklisch")
        return self._generator

    @cached_property
    def _log_table(self) -> Dict[int, int]:
        g = self.quotient_generator()
        table: Dict[int, int] = {}
        y = 1 % self.modulus
        for j in range(self.degree):
            table[self.label(y)] = j
            y = y * g % self.modulus
        return table

    def galois_log(self, t: int) -> int:
        """j mit t·H = g^j·H für den festen Erzeuger g"""
        return self._log_table[self.label(t)]

    def __str__(self) -> str:
        gens = ",".join(str(g) for g in self.subgroup)
        return f"K(N={self.modulus}, H=<{gens}>)"


# ---------------------------------------------------------------------------
# Körperoperationen
# ---------------------------------------------------------------------------

def canonicalize(field: AbelianFieldQ) -> AbelianFieldQ:
    """Darstellung mit minimalem Modul (Führer)"""
    n = field.modulus
    h = field.elements
    for d in divisors(n):
        d = int(d)
        # Kern von (Z/NZ)^× -> (Z/dZ)^×
        kernel = (x for x in range(1, n + 1, d) if gcd(x, n) == 1)
        if all(x % n in h for x in kernel):
            if d == n:
                return field
            return AbelianFieldQ.from_generators(d, (x % d for x in field.subgroup))
    return field


def rational_field() -> AbelianFieldQ:
    return AbelianFieldQ.from_generators(1, [])


def explicit_field(modulus: int, generators: Iterable[int]) -> AbelianFieldQ:
    return canonicalize(AbelianFieldQ.from_generators(modulus, generators))


def cyclotomic_field(modulus: int) -> AbelianFieldQ:
    return explicit_field(modulus, [])


def _preimage(field: AbelianFieldQ, modulus: int) -> List[int]:
    return [x for x in units(modulus) if field.contains(x)]


def compositum(f1: AbelianFieldQ, f2: AbelianFieldQ) -> AbelianFieldQ:
    """Kompositum: Schnitt der Urbilder von H1 und H2 mod kgV"""
    m = lcm(f1.modulus, f2.modulus)
    elements = [x for x in units(m) if f1.contains(x) and f2.contains(x)]
    result = canonicalize(AbelianFieldQ.from_generators(m, greedy_generators(elements, m)))
    logger.debug(f"Kompositum {f1} · {f2} = {result}")
    return result


def intersection(f1: AbelianFieldQ, f2: AbelianFieldQ) -> AbelianFieldQ:
    """Durchschnitt: erzeugt von den Urbildern von H1 und H2 mod kgV"""
    m = lcm(f1.modulus, f2.modulus)
    gens = greedy_generators(_preimage(f1, m), m) + greedy_generators(_preimage(f2, m), m)
    return canonicalize(AbelianFieldQ.from_generators(m, gens))


def is_subfield(small: AbelianFieldQ, big: AbelianFieldQ) -> bool:
    """small ⊆ big für kanonische Darstellungen"""
    if big.modulus % small.modulus != 0:
        return False
    return all(small.contains(h) for h in big.subgroup)


def subfield_of_degree(field: AbelianFieldQ, d: int) -> AbelianFieldQ:
    """Eindeutiger Teilkörper vom Grad d eines zyklischen Körpers"""
    if not field.is_cyclic():
        raise NonCyclic(f"{field} ist nicht zyklisch")
    if d < 1 or field.degree % d != 0:
        raise BadDegree(f"Grad {d} teilt nicht [K:Q] = {field.degree}")
    g = field.quotient_generator()
    gens = list(field.subgroup) + [pow(g, d, field.modulus)]
    return canonicalize(AbelianFieldQ.from_generators(field.modulus, gens))


def prime_power_part(field: AbelianFieldQ, p: int) -> AbelianFieldQ:
    """K(p): größter Teilkörper von p-Potenzgrad"""
    return subfield_of_degree(field, p ** int(multiplicity(p, field.degree)))


def ramified_primes(field: AbelianFieldQ) -> List[int]:
    return sorted(int(q) for q in factorint(field.modulus))


# ---------------------------------------------------------------------------
# Lokale Daten
# ---------------------------------------------------------------------------

def decomposition_generators(modulus: int, v: Place) -> List[int]:
    """
    Erzeuger der Zerlegungsgruppe von v in (Z/NZ)^×.

    Für N = q^a·m: der volle Block (Z/q^aZ)^× und q mod m; an ∞ die Klasse −1.
    """
    if v.is_infinite:
        return [-1 % modulus]
    q = v.prime
    qa, rest = _split_prime(modulus, q)
    if qa == 1:
        return [q % modulus]
    a = int(multiplicity(q, qa))
    gens = [crt_lift([g, 1], [qa, rest]) for g in prime_power_unit_generators(q, a)]
    gens.append(crt_lift([1, q], [qa, rest]))
    return gens


def inertia_generators(modulus: int, q: int) -> List[int]:
    qa, rest = _split_prime(modulus, q)
    if qa == 1:
        return []
    a = int(multiplicity(q, qa))
    return [crt_lift([g, 1], [qa, rest]) for g in prime_power_unit_generators(q, a)]


def decomposition_group(field: AbelianFieldQ, v: Place) -> GaloisSubgroup:
    n = field.modulus
    return GaloisSubgroup(n, tuple(decomposition_generators(n, v)))


def inertia_group(field: AbelianFieldQ, q: int) -> GaloisSubgroup:
    n = field.modulus
    return GaloisSubgroup(n, tuple(inertia_generators(n, q)))


def residue_degree(field: AbelianFieldQ, q: int) -> int:
    """Restklassengrad einer unverzweigten Primzahl q ∤ N"""
    if field.modulus % q == 0:
        raise BadDegree(f"{q} teilt den Führer {field.modulus}")
    return field.quotient_order(q)


def local_degree(field: AbelianFieldQ, v: Place) -> int:
    """Lokaler Grad [K_v : Q_v] = |Bild von D_v in (Z/NZ)^×/H|"""
    d = decomposition_group(field, v)
    return len({field.label(x) for x in d.elements})


def as_fraction(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def local_artin_symbol(modulus: int, v: Place, c) -> int:
    """
    Lokales Artin-Symbol von c an v in (Z/NZ)^×.

    Für v = p, N = p^a·m, c = p^val·u: t ≡ p^val (mod m), t ≡ u^{-1} (mod p^a).
    An ∞: t = −1 genau für c < 0.
    """
    c = as_fraction(c)
    if c == 0:
        raise ZeroInput("c = 0 hat kein Artin-Symbol")
    if modulus == 1:
        return 0
    if v.is_infinite:
        return -1 % modulus if c < 0 else 1
    p = v.prime
    val = int(multiplicity(p, abs(c.numerator))) - int(multiplicity(p, c.denominator))
    unit = c / Fraction(p) ** val
    pa, rest = _split_prime(modulus, p)
    at_rest = pow(p, val, rest) if rest > 1 else 0
    at_p = unit.denominator * pow(unit.numerator, -1, pa) if pa > 1 else 0
    return crt_lift([at_rest, at_p], [rest, pa]) % modulus


def symbol_support(modulus: int, c) -> List[Place]:
    """Endliche Stellenmenge {p | N} ∪ {p | c} ∪ {∞}"""
    c = as_fraction(c)
    primes = set(int(q) for q in factorint(modulus))
    primes.update(int(q) for q in factorint(abs(c.numerator)))
    primes.update(int(q) for q in factorint(c.denominator))
    primes.discard(1)
    return [Place(q) for q in sorted(primes)] + [INFINITY]


# ---------------------------------------------------------------------------
# Konstruktoren
# ---------------------------------------------------------------------------

def quadratic_field(radicand: int) -> AbelianFieldQ:
    """Q(√D) für quadratfreies D ≠ 0"""
    if radicand == 0 or any(e > 1 for e in factorint(abs(radicand)).values()):
        raise FieldSpecError(f"D = {radicand} ist nicht quadratfrei und ungleich 0")
    if radicand == 1:
        return rational_field()
    disc = radicand if radicand % 4 == 1 else 4 * radicand
    n = abs(disc)

    def character(x: int) -> int:
        odd = x if x % 2 == 1 else x + n
        return int(jacobi_symbol(disc % odd, odd)) if odd > 1 else 1

    kernel = [x for x in units(n) if character(x) == 1]
    return AbelianFieldQ.from_generators(n, greedy_generators(kernel, n))


def quadratic_radicand(field: AbelianFieldQ) -> int:
    """Quadratfreies D mit K = Q(√D)"""
    if field.degree != 2:
        raise BadDegree(f"{field} ist nicht quadratisch")
    n = field.modulus
    disc = n if field.contains(-1) else -n
    return disc if n % 2 == 1 else disc // 4


def _subgroups_containing(modulus: int, base: FrozenSet[int], order: int) -> List[FrozenSet[int]]:
    """Alle Untergruppen von (Z/NZ)^× der gegebenen Ordnung, die base enthalten"""
    reps = []
    seen: set = set()
    for x in units(modulus):
        if x in seen:
            continue
        reps.append(x)
        seen.update(x * b % modulus for b in base)
    base_gens = list(greedy_generators(base, modulus))
    found = {base}
    frontier = [base]
    while frontier:
        next_frontier = []
        for group in frontier:
            if len(group) >= order:
                continue
            for x in reps:
                if x in group:
                    continue
                bigger = residue_closure(modulus, base_gens + list(greedy_generators(group, modulus)) + [x])
                if len(bigger) <= order and bigger not in found:
                    found.add(bigger)
                    next_frontier.append(bigger)
        frontier = next_frontier
    return [g for g in found if len(g) == order]


def subfields_of_degree(field: AbelianFieldQ, d: int) -> List[AbelianFieldQ]:
    """Alle Teilkörper vom Grad d in kanonischer Form, sortiert nach Führer und Untergruppe"""
    if d < 1 or field.degree % d:
        raise BadDegree(f"Grad {d} teilt nicht {field.degree}")
    n = field.modulus
    phi = int(totient(n))
    fields = [
        canonicalize(AbelianFieldQ.from_generators(n, greedy_generators(group, n)))
        for group in _subgroups_containing(n, field.elements, phi // d)
    ]
    return sorted(fields, key=lambda K: (K.modulus, sorted(K.elements)))


def quadratic_subfields(field: AbelianFieldQ) -> List[AbelianFieldQ]:
    """Alle quadratischen Teilkörper, sortiert nach |D| und dann D"""
    if field.degree % 2:
        return []
    fields = subfields_of_degree(field, 2)
    return sorted(fields, key=lambda K: (abs(quadratic_radicand(K)), quadratic_radicand(K)))


def cyclotomic_subfield(modulus: int, d: int) -> AbelianFieldQ:
    """Eindeutiger Teilkörper vom Grad d von Q(ζ_N)"""
    phi = int(totient(modulus))
    if d < 1 or phi % d != 0:
        raise BadDegree(f"Grad {d} teilt nicht φ({modulus}) = {phi}")
    powers = residue_closure(modulus, (pow(x, d, modulus) for x in units(modulus)))
    candidates = _subgroups_containing(modulus, powers, phi // d)
    if len(candidates) != 1:
        raise FieldSpecError(
            f"Q(ζ_{modulus}) hat {len(candidates)} Teilkörper vom Grad {d}, erwartet genau einen"
        )
    field = AbelianFieldQ.from_generators(modulus, greedy_generators(candidates[0], modulus))
    return canonicalize(field)


def field_to_dict(field: AbelianFieldQ) -> Dict[str, object]:
    return {"modulus": field.modulus, "subgroup": list(field.subgroup)}


def field_from_dict(data: Dict[str, object]) -> AbelianFieldQ:
    return explicit_field(int(data["modulus"]), [int(g) for g in data.get("subgroup", [])])
