#!/usr/bin/env python3
"""
Splitting Module
Reduktion der Stellen von Q auf endlich viele Stellenklassen und Berechnung
der lokalen Grad-Exponenten e_{i,v} für einen Kontext (K zyklisch vom Grad p^e; K_1..K_m)
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, lcm
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple
import logging

from pydantic import ValidationError
from sympy import factorint, totient

from core.abelian_q import (
    INFINITY,
    AbelianFieldQ,
    GaloisSubgroup,
    Place,
    decomposition_generators,
    frobenius_classes,
    generate_subgroup,
    subfield_of_degree,
    unit_group_generators,
)
from core.architecture import ComputationLimits, Granularity, PlaceKind, resolve_limits
from core.errors import BadDegree, InvariantViolation, MalformedProfile, ModulusTooLarge, NonCyclic, WrongShape
from core.validation import ProfileDocument, format_validation_error
from schema.validate_input import PROFILE_SCHEMA, get_validation_errors

logger = logging.getLogger(__name__)


Signature = Tuple[int, ...]


def log_p(size: int, p: int) -> int:
    """Exponent k mit size = p^k"""
    k = 0
    while size > 1:
        if size % p:
            raise InvariantViolation(f"{size} ist keine Potenz von {p}")
        size //= p
        k += 1
    return k


class GaloisFrame:
    """
    Galoisgruppe des Kompositums der gegebenen Körper, realisiert als Bild von
    (Z/MZ)^× in ∏ Gal(F_f/Q). Elemente sind Tupel von Nebenklassen-Vertretern.
    """

    def __init__(self, fields: Sequence[AbelianFieldQ]) -> None:
        self.fields: Tuple[AbelianFieldQ, ...] = tuple(fields)
        self.modulus: int = lcm(*(f.modulus for f in self.fields)) if self.fields else 1
        self._tables = [(f.modulus, f.coset_labels) for f in self.fields]
        self.identity: Signature = self.signature(1)

    def signature(self, x: int) -> Signature:
        return tuple(labels[x % n] for n, labels in self._tables)

    def mul(self, a: Signature, b: Signature) -> Signature:
        return tuple(labels[x * y % n] for (n, labels), x, y in zip(self._tables, a, b))

    def power(self, a: Signature, k: int) -> Signature:
        result = self.identity
        for _ in range(k):
            result = self.mul(result, a)
        return result

    def closure(self, signatures: Iterable[Signature]) -> FrozenSet[Signature]:
        return generate_subgroup(signatures, self.identity, self.mul)

    def closure_of_residues(self, residues: Iterable[int]) -> FrozenSet[Signature]:
        return self.closure(self.signature(x) for x in residues)

    @cached_property
    def group(self) -> FrozenSet[Signature]:
        """Gal(F/Q) für das Kompositum F"""
        return self.closure_of_residues(unit_group_generators(self.modulus))

    def decomposition(self, v: Place) -> FrozenSet[Signature]:
        return self.closure_of_residues(decomposition_generators(self.modulus, v))

    def kernel(self, D: Iterable[Signature], coordinate: int) -> List[Signature]:
        """Elemente von D, die auf dem Körper an Position coordinate trivial wirken"""
        one = self.identity[coordinate]
        return [g for g in D if g[coordinate] == one]

    def image_size(self, D: Iterable[Signature], coordinate: int = 0) -> int:
        return len({g[coordinate] for g in D})

    def local_exponent(self, D: Iterable[Signature], coordinate: int, p: int) -> int:
        """log_p |Bild von D ∩ Gal(·/F_coordinate) in Gal(F_0/Q)|"""
        return log_p(self.image_size(self.kernel(D, coordinate), 0), p)

    def has_exponent(self, p: int) -> bool:
        return all(self.power(g, p) == self.identity for g in self.group)


@dataclass(frozen=True)
class Context:
    """Zyklischer Pivot K vom Grad p^e mit Faktoren K_1..K_m"""
    pivot: AbelianFieldQ
    factors: Tuple[AbelianFieldQ, ...]
    p: int
    e: int
    exps: Tuple[int, ...]
    factor_order: Tuple[int, ...]
    modulus: int
    frame: GaloisFrame = field(compare=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.factors)

    @property
    def original_exps(self) -> Tuple[int, ...]:
        return to_original(self.exps, self.factor_order)


def to_original(vector: Sequence[int], factor_order: Sequence[int]) -> Tuple[int, ...]:
    """Sortierte Reihenfolge -> ursprüngliche Reihenfolge"""
    result = [0] * len(vector)
    for position, index in enumerate(factor_order):
        result[index] = vector[position]
    return tuple(result)


def to_sorted(vector: Sequence[int], factor_order: Sequence[int]) -> Tuple[int, ...]:
    """Ursprüngliche Reihenfolge -> sortierte Reihenfolge"""
    return tuple(vector[index] for index in factor_order)


def make_context(pivot: AbelianFieldQ, factors: Sequence[AbelianFieldQ]) -> Context:
    """
    Baut den Kontext (K; K_1..K_m) und berechnet die globalen Exponenten e_i.

    Raises:
        NonCyclic: Pivot nicht zyklisch
        BadDegree: Grad des Pivots keine Primpotenz p^e mit e ≥ 1
    """
    if not pivot.is_cyclic():
        raise NonCyclic(f"Pivot {pivot} ist nicht zyklisch")
    primes = factorint(pivot.degree)
    if len(primes) != 1:
        raise BadDegree(f"Grad {pivot.degree} des Pivots ist keine Primpotenz p^e mit e ≥ 1")
    (p, e), = primes.items()
    p, e = int(p), int(e)
    factors = tuple(factors)
    frame = GaloisFrame((pivot,) + factors)
    group = frame.group
    original = [frame.local_exponent(group, i + 1, p) for i in range(len(factors))]
    order = tuple(sorted(range(len(factors)), key=lambda i: -original[i]))
    ctx = Context(
        pivot=pivot,
        factors=factors,
        p=p,
        e=e,
        exps=tuple(original[i] for i in order),
        factor_order=order,
        modulus=frame.modulus,
        frame=frame,
    )
    logger.debug(f"Kontext p={p}, e={e}, Exponenten {ctx.exps}, Modul {ctx.modulus}")
    return ctx


def kzero_context(ctx: Context) -> Optional[Context]:
    """Kontext für K_0 (Grad p^{e-1}); None für e = 1"""
    if ctx.e == 1:
        return None
    return make_context(subfield_of_degree(ctx.pivot, ctx.p ** (ctx.e - 1)), ctx.factors)


def kprim_context(ctx: Context) -> Context:
    """Kontext für K_prim (Grad p)"""
    return make_context(subfield_of_degree(ctx.pivot, ctx.p), ctx.factors)


@dataclass(frozen=True)
class PlaceClass:
    """Stellenklasse mit Exponentenvektor (sortierte Reihenfolge)"""
    kind: PlaceKind
    value: Optional[int]
    exponents: Tuple[int, ...]
    pivot_exp: int
    decomposition: Optional[GaloisSubgroup] = field(default=None, compare=False, repr=False)

    @property
    def place(self) -> Optional[Place]:
        if self.kind == PlaceKind.INFINITY:
            return INFINITY
        if self.kind == PlaceKind.PRIME:
            return Place(self.value)
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "value": self.value,
            "exponents": list(self.exponents),
            "pivot_exp": self.pivot_exp,
        }

    def __str__(self) -> str:
        tag = {PlaceKind.INFINITY: "∞", PlaceKind.PRIME: f"p={self.value}"}.get(self.kind, f"Frob {self.value}")
        return f"{tag}: {self.exponents}"


@dataclass(frozen=True)
class SplittingProfile:
    """Exponentenvektoren aller Stellenklassen eines Kontexts"""
    p: int
    e: int
    exps: Tuple[int, ...]
    factor_order: Tuple[int, ...]
    classes: Tuple[PlaceClass, ...]
    granularity: Granularity = Granularity.RESIDUE
    context: Optional[Context] = field(default=None, compare=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.exps)

    @cached_property
    def class_types(self) -> Tuple[Tuple[int, ...], ...]:
        """Verschiedene Exponentenvektoren, deterministisch sortiert"""
        return tuple(sorted({c.exponents for c in self.classes}))

    @cached_property
    def _by_key(self) -> Dict[Tuple[PlaceKind, Optional[int]], PlaceClass]:
        return {(c.kind, c.value): c for c in self.classes}

    @cached_property
    def _by_signature(self) -> Dict[Signature, PlaceClass]:
        frame = self._frame()
        return {
            frame.signature(c.value): c for c in self.classes if c.kind == PlaceKind.FROBENIUS
        }

    def _frame(self) -> GaloisFrame:
        if self.context is None:
            raise WrongShape("Profil ohne Kontext: keine Zuordnung echter Stellen möglich")
        return self.context.frame

    def class_for_place(self, v: Place) -> PlaceClass:
        """Klasse einer beliebigen Stelle (verzweigt, ∞ oder über Frobenius)"""
        if v.is_infinite:
            return self._by_key[(PlaceKind.INFINITY, None)]
        exceptional = self._by_key.get((PlaceKind.PRIME, v.prime))
        if exceptional is not None:
            return exceptional
        modulus = self._frame().modulus
        if self.granularity == Granularity.RESIDUE:
            return self._by_key[(PlaceKind.FROBENIUS, v.prime % modulus if modulus > 1 else 1)]
        return self._by_signature[self._frame().signature(v.prime)]

    def class_for_prime(self, q: int) -> PlaceClass:
        return self.class_for_place(Place(q))


def _exponent_data(ctx: Context, D: FrozenSet[Signature]) -> Tuple[Tuple[int, ...], int]:
    frame = ctx.frame
    original = [frame.local_exponent(D, i + 1, ctx.p) for i in range(ctx.m)]
    pivot_exp = log_p(frame.image_size(D, 0), ctx.p)
    return to_sorted(original, ctx.factor_order), pivot_exp


def place_exponents(ctx: Context, v: Place) -> Tuple[Tuple[int, ...], int]:
    """Exponentenvektor (sortiert) und Pivot-Exponent an einer konkreten Stelle"""
    frame = ctx.frame
    if v.is_infinite or ctx.modulus % v.prime == 0:
        return _exponent_data(ctx, frame.decomposition(v))
    return _exponent_data(ctx, frame.closure([frame.signature(v.prime)]))


def local_degree_exponent(ctx: Context, i: int, cls: PlaceClass) -> int:
    """
    log_p der Ordnung des Bildes von D_v ∩ H_i in Gal(K/Q)

    Args:
        ctx: Kontext
        i: Faktor-Index in ursprünglicher Reihenfolge
        cls: Stellenklasse mit Zerlegungsgruppe
    """
    if not 0 <= i < ctx.m:
        raise WrongShape(f"Faktor-Index {i} außerhalb von 0..{ctx.m - 1}")
    if cls.decomposition is None:
        raise WrongShape("Stellenklasse ohne Zerlegungsgruppe")
    D = ctx.frame.closure_of_residues(cls.decomposition.generators)
    return ctx.frame.local_exponent(D, i + 1, ctx.p)


def sigma_membership(profile: SplittingProfile, i: int, d: int, cls: PlaceClass) -> bool:
    """Liegt die Klasse in Σ_i^d? (i in sortierter Reihenfolge)"""
    if d < 0:
        raise WrongShape(f"d = {d} ist negativ")
    return cls.exponents[i] <= d


def _galois_representatives(frame: GaloisFrame) -> List[int]:
    """Kleinster Vertreter mod M jedes Elements von Gal(F/Q)"""
    target = len(frame.group)
    found: Dict[Signature, int] = {}
    x = 1
    while len(found) < target:
        if gcd(x, frame.modulus) == 1:
            found.setdefault(frame.signature(x), x % frame.modulus if frame.modulus > 1 else 1)
        x += 1
    return sorted(found.values())


def _frobenius_chunk(ctx: Context, residues: Sequence[int]) -> List[PlaceClass]:
    frame = ctx.frame
    cache: Dict[Signature, Tuple[Tuple[int, ...], int]] = {}
    classes = []
    for t in residues:
        sig = frame.signature(t)
        data = cache.get(sig)
        if data is None:
            data = cache[sig] = _exponent_data(ctx, frame.closure([sig]))
        classes.append(
            PlaceClass(PlaceKind.FROBENIUS, t, data[0], data[1], GaloisSubgroup(ctx.modulus, (t,)))
        )
    return classes


def _chunks(items: Sequence[int], count: int) -> List[Sequence[int]]:
    size = max(1, -(-len(items) // count))
    return [items[k:k + size] for k in range(0, len(items), size)]


def build_profile(
    ctx: Context,
    granularity: Granularity = Granularity.RESIDUE,
    limits: Optional[ComputationLimits] = None,
) -> SplittingProfile:
    """
    Baut das Splitting-Profil eines Kontexts.

    RESIDUE: eine Frobenius-Klasse pro Einheit mod N; GALOIS: eine pro Element
    von Gal(F/Q); AUTO wählt RESIDUE nur, wenn F = Q(ζ_N) und φ(N) unter der Grenze liegt.
    Dazu je eine Klasse pro Primteiler von N und für ∞.

    Raises:
        ModulusTooLarge: Grenze für die Anzahl der Klassen überschritten
    """
    limits = resolve_limits(limits)
    granularity = Granularity(granularity)
    frame = ctx.frame
    modulus = ctx.modulus
    unit_count = int(totient(modulus))
    if granularity == Granularity.AUTO:
        full = unit_count <= limits.modulus and len(frame.group) == unit_count
        granularity = Granularity.RESIDUE if full else Granularity.GALOIS
    if granularity == Granularity.RESIDUE:
        if unit_count > limits.modulus:
            raise ModulusTooLarge(
                f"φ({modulus}) = {unit_count} überschreitet die Grenze {limits.modulus}",
                {"modulus": modulus, "units": unit_count, "limit": limits.modulus},
            )
        residues = frobenius_classes(modulus)
    else:
        if len(frame.group) > limits.galois:
            raise ModulusTooLarge(
                f"|Gal(F/Q)| = {len(frame.group)} überschreitet die Grenze {limits.galois}",
                {"modulus": modulus, "group": len(frame.group), "limit": limits.galois},
            )
        residues = _galois_representatives(frame)

    if limits.max_workers > 1 and len(residues) > 1:
        chunks = _chunks(residues, limits.max_workers)
        results: Dict[int, List[PlaceClass]] = {}
        with ThreadPoolExecutor(max_workers=limits.max_workers) as executor:
            futures = {executor.submit(_frobenius_chunk, ctx, chunk): k for k, chunk in enumerate(chunks)}
            for future in as_completed(futures):
                results[futures[future]] = future.result()
        frobenius = [c for k in sorted(results) for c in results[k]]
    else:
        frobenius = _frobenius_chunk(ctx, residues)

    if frame.has_exponent(ctx.p):
        for cls in frobenius:
            if cls.pivot_exp > 1:
                raise InvariantViolation(
                    f"Frobenius-Klasse {cls.value} hat lokalen Pivot-Grad > {ctx.p} in einer Gruppe vom Exponenten {ctx.p}"
                )

    exceptional = []
    for q in sorted(int(q) for q in factorint(modulus)):
        v = Place(q)
        exps, pivot_exp = _exponent_data(ctx, frame.decomposition(v))
        exceptional.append(
            PlaceClass(PlaceKind.PRIME, q, exps, pivot_exp, GaloisSubgroup(modulus, tuple(decomposition_generators(modulus, v))))
        )
    exps, pivot_exp = _exponent_data(ctx, frame.decomposition(INFINITY))
    exceptional.append(
        PlaceClass(PlaceKind.INFINITY, None, exps, pivot_exp, GaloisSubgroup(modulus, (-1 % modulus,)))
    )

    for cls in exceptional + frobenius:
        if any(x > bound for x, bound in zip(cls.exponents, ctx.exps)):
            raise InvariantViolation(f"Lokaler Exponent größer als globaler in Klasse {cls}")

    profile = SplittingProfile(
        p=ctx.p,
        e=ctx.e,
        exps=ctx.exps,
        factor_order=ctx.factor_order,
        classes=tuple(exceptional + frobenius),
        granularity=granularity,
        context=ctx,
    )
    logger.info(
        f"Profil gebaut: p={ctx.p}, e={ctx.e}, Modul {modulus}, {len(profile.classes)} Klassen, "
        f"{len(profile.class_types)} Typen ({granularity.value})"
    )
    return profile


def relative_profile(profile: SplittingProfile) -> SplittingProfile:
    """Profil mit r_i = min(1, e_i) und Exponenten min(e_{i,v}, 1) für Ш(K/K_0, K')"""
    classes = tuple(
        PlaceClass(c.kind, c.value, tuple(min(x, 1) for x in c.exponents), min(c.pivot_exp, 1), c.decomposition)
        for c in profile.classes
    )
    return SplittingProfile(
        p=profile.p,
        e=1,
        exps=tuple(min(x, 1) for x in profile.exps),
        factor_order=profile.factor_order,
        classes=classes,
        granularity=profile.granularity,
        context=None,
    )


def export_profile(profile: SplittingProfile) -> Dict[str, Any]:
    return {
        "p": profile.p,
        "e": profile.e,
        "exps": list(profile.exps),
        "factor_order": list(profile.factor_order),
        "granularity": profile.granularity.value,
        "classes": [c.to_dict() for c in profile.classes],
    }


def import_profile(data: Dict[str, Any]) -> SplittingProfile:
    """
    Liest ein Profil aus JSON-Daten und prüft Schema und Invarianten.

    Raises:
        MalformedProfile: mit feldgenauen Diagnosen
    """
    schema_errors = get_validation_errors(data, str(PROFILE_SCHEMA))
    if schema_errors:
        diagnostics = [f"{e['path'] or '<root>'}: {e['message']}" for e in schema_errors]
        logger.error(f"Profil verletzt das Schema: {diagnostics}")
        raise MalformedProfile("Profil verletzt das JSON-Schema", diagnostics)
    try:
        document = ProfileDocument(**data)
    except ValidationError as e:
        diagnostics = format_validation_error(e)
        logger.error(f"Profil verletzt Invarianten: {diagnostics}")
        raise MalformedProfile("Profil verletzt die Profil-Invarianten", diagnostics)

    m = len(document.exps)
    factor_order = tuple(document.factor_order) if document.factor_order is not None else tuple(range(m))
    classes = tuple(
        PlaceClass(PlaceKind(c.kind), c.value, tuple(c.exponents), c.pivot_exp) for c in document.classes
    )
    return SplittingProfile(
        p=document.p,
        e=document.e,
        exps=tuple(document.exps),
        factor_order=factor_order,
        classes=classes,
        granularity=Granularity(document.granularity),
        context=None,
    )
