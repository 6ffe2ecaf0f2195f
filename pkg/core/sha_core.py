#!/usr/bin/env python3
"""
Sha Core Module
Zahlentheorie-freier Kern: aus einem Splitting-Profil die Gruppe G, die Diagonale D,
Ш(K, K') = G/D, die Abbildungen F und π, die relative Gruppe Ш(K/K_0, K')
sowie Partitionsansichten im Fall e = 1
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from functools import cached_property, reduce
from operator import mul
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple
import logging

from sympy import ZZ, factorint
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors as snf_invariant_factors

from core.abelian_q import AbelianFieldQ, prime_power_part
from core.architecture import ComputationLimits, resolve_limits
from core.errors import AmbientTooLarge, InvariantViolation, NoCyclicFactor, NotCoherent, WrongExponent, WrongShape
from core.splitting import (
    Context,
    PlaceClass,
    SplittingProfile,
    build_profile,
    make_context,
    relative_profile,
    to_original,
    to_sorted,
)

logger = logging.getLogger(__name__)

TupleVec = Tuple[int, ...]
IndexTuple = Tuple[FrozenSet[int], ...]
Partition = Tuple[FrozenSet[int], ...]


# ---------------------------------------------------------------------------
# Dominanz, δ und die Bijektion I
# ---------------------------------------------------------------------------

def dominates(x: int, s: int, y: int, t: int, p: int) -> bool:
    """x ∈ Z/p^s dominiert y ∈ Z/p^t"""
    return s >= t and x % p ** t == y % p ** t


def delta(x: int, s: int, y: int, t: int, p: int) -> int:
    """Größtes d ≤ min(s, t) mit x ≡ y mod p^d"""
    d = min(s, t)
    while d > 0 and (x - y) % p ** d:
        d -= 1
    return d


def index_sets(a: Sequence[int], n: int, p: int, exps: Sequence[int]) -> FrozenSet[int]:
    """I_n(a) = {i : n ≽ a_i} (Indizes 0-basiert, sortierte Reihenfolge)"""
    return frozenset(i for i, (ai, ei) in enumerate(zip(a, exps)) if n % p ** ei == ai)


def index_tuple(a: Sequence[int], p: int, exps: Sequence[int]) -> IndexTuple:
    """I(a) = (I_0(a), ..., I_{p^{e_1}-1}(a))"""
    top = p ** (exps[0] if exps else 0)
    return tuple(index_sets(a, n, p, exps) for n in range(top))


def coherence_check(sets: Sequence[FrozenSet[int]], p: int, exps: Sequence[int]) -> bool:
    """Kohärenzbedingungen (1) und (2) für ein Tupel von Indexmengen"""
    m = len(exps)
    top = p ** (exps[0] if exps else 0)
    if len(sets) != top:
        return False
    if set().union(*sets) != set(range(m)):
        return False
    for n1, first in enumerate(sets):
        for n2, second in enumerate(sets):
            for i in first:
                modulus = p ** exps[i]
                same = n1 % modulus == n2 % modulus
                if i in second and not same:
                    return False
                if same and i not in second:
                    return False
    return True


def invert_I(sets: Sequence[FrozenSet[int]], p: int, exps: Sequence[int]) -> TupleVec:
    """Umkehrung von I auf kohärenten Tupeln"""
    if not coherence_check(sets, p, exps):
        raise NotCoherent("Tupel von Indexmengen ist nicht kohärent")
    a = [0] * len(exps)
    for n, block in enumerate(sets):
        for i in block:
            a[i] = n % p ** exps[i]
    return tuple(a)


def covering_values(p: int, exps: Sequence[int], a: Sequence[int], exponents: Sequence[int]) -> List[int]:
    """Alle n mit Klasse ∈ Ω(I_n(a)) für den Exponentenvektor einer Klasse"""
    top = p ** (exps[0] if exps else 0)
    values = []
    for n in range(top):
        inside = index_sets(a, n, p, exps)
        if all(
            exponents[i] <= delta(n, exps[0], a[i], exps[i], p)
            for i in range(len(exps))
            if i not in inside
        ):
            values.append(n)
    return values


def omega_covers(profile: SplittingProfile, a: Sequence[int], cls: PlaceClass) -> Optional[int]:
    """Kleinstes n mit cls ∈ Ω(I_n(a)), None falls keines existiert"""
    values = covering_values(profile.p, profile.exps, a, cls.exponents)
    return values[0] if values else None


def membership_G(profile: SplittingProfile, a: Sequence[int]) -> bool:
    return all(
        covering_values(profile.p, profile.exps, a, exponents)
        for exponents in profile.class_types
    )


# ---------------------------------------------------------------------------
# Gruppenarithmetik auf ⊕ Z/p^{e_i}Z
# ---------------------------------------------------------------------------

def _moduli(p: int, exps: Sequence[int]) -> Tuple[int, ...]:
    return tuple(p ** e for e in exps)


def _add(a: TupleVec, b: TupleVec, moduli: Sequence[int]) -> TupleVec:
    return tuple((x + y) % m for x, y, m in zip(a, b, moduli))


def _scale(k: int, a: TupleVec, moduli: Sequence[int]) -> TupleVec:
    return tuple(k * x % m for x, m in zip(a, moduli))


def _order(a: TupleVec, moduli: Sequence[int]) -> int:
    zero = tuple(0 for _ in moduli)
    k, y = 1, a
    while y != zero:
        y = _add(y, a, moduli)
        k += 1
    return k


# ---------------------------------------------------------------------------
# Aufzählung von G
# ---------------------------------------------------------------------------

def _masks(p: int, top_exp: int) -> List[List[int]]:
    """masks[ε][r] = Bitmaske aller n ∈ Z/p^{e_1} mit n ≡ r mod p^ε"""
    top = p ** top_exp
    table = []
    for eps in range(top_exp + 1):
        modulus = p ** eps
        row = []
        for r in range(modulus):
            mask = 0
            for n in range(r, top, modulus):
                mask |= 1 << n
            row.append(mask)
        table.append(row)
    return table


def _enumerate_branch(profile: SplittingProfile, first_values: Sequence[int]) -> List[TupleVec]:
    p, exps = profile.p, profile.exps
    m = len(exps)
    types = profile.class_types
    masks = _masks(p, exps[0])
    full = (1 << p ** exps[0]) - 1
    results: List[TupleVec] = []
    prefix: List[int] = []

    def descend(i: int, state: List[int], values: Sequence[int]) -> None:
        if i == m:
            results.append(tuple(prefix))
            return
        for x in values:
            narrowed = []
            for k, exponents in enumerate(types):
                eps = exponents[i]
                mask = state[k] & masks[eps][x % p ** eps]
                if not mask:
                    break
                narrowed.append(mask)
            else:
                prefix.append(x)
                next_values = range(p ** exps[i + 1]) if i + 1 < m else ()
                descend(i + 1, narrowed, next_values)
                prefix.pop()

    descend(0, [full] * len(types), first_values)
    return results


def enumerate_G(profile: SplittingProfile, limits: Optional[ComputationLimits] = None) -> List[TupleVec]:
    """
    Alle a ∈ ⊕ Z/p^{e_i}Z mit a ∈ G, lexikographisch sortiert.

    Tiefensuche über die Koordinaten; ein Präfix wird verworfen, sobald ein
    Klassentyp keinen zulässigen Wert n mehr hat.
    """
    limits = resolve_limits(limits)
    ambient = reduce(mul, _moduli(profile.p, profile.exps), 1)
    if ambient > limits.ambient:
        raise AmbientTooLarge(
            f"|⊕ Z/p^e_i| = {ambient} überschreitet die Grenze {limits.ambient}",
            {"ambient": ambient, "limit": limits.ambient},
        )
    if not profile.exps:
        return [()]
    first = list(range(profile.p ** profile.exps[0]))
    if limits.max_workers > 1 and len(first) > 1:
        results: Dict[int, List[TupleVec]] = {}
        with ThreadPoolExecutor(max_workers=limits.max_workers) as executor:
            futures = {executor.submit(_enumerate_branch, profile, [x]): x for x in first}
            for future in as_completed(futures):
                results[futures[future]] = future.result()
        members = [a for x in sorted(results) for a in results[x]]
    else:
        members = _enumerate_branch(profile, first)
    logger.debug(f"G aufgezählt: {len(members)} von {ambient} Elementen")
    return members


# ---------------------------------------------------------------------------
# Quotient G/D
# ---------------------------------------------------------------------------

def _presentation(members: Sequence[TupleVec], moduli: Sequence[int]) -> Tuple[List[TupleVec], List[List[int]], Dict[TupleVec, Tuple[int, ...]]]:
    """
    Polyzyklische Darstellung: Erzeuger g_k mit relativen Ordnungen t_k und
    Relationen t_k·g_k = Σ c_j g_j (j < k). Liefert Erzeuger, Relationszeilen
    und die Koeffizienten jedes erzeugten Elements.
    """
    zero = tuple(0 for _ in moduli)
    span: Dict[TupleVec, Tuple[int, ...]] = {zero: ()}
    generators: List[TupleVec] = []
    relations: List[Tuple[int, Tuple[int, ...]]] = []
    for x in members:
        if x in span:
            continue
        t, y = 1, x
        while y not in span:
            y = _add(y, x, moduli)
            t += 1
        relations.append((t, span[y]))
        extended: Dict[TupleVec, Tuple[int, ...]] = {}
        jx = zero
        for j in range(t):
            for element, coefficients in span.items():
                extended[_add(element, jx, moduli)] = coefficients + (j,)
            jx = _add(jx, x, moduli)
        span = extended
        generators.append(x)
    k = len(generators)
    rows = []
    for index, (t, coefficients) in enumerate(relations):
        row = [-c for c in coefficients] + [t] + [0] * (k - index - 1)
        rows.append(row)
    padded = {element: coefficients + (0,) * (k - len(coefficients)) for element, coefficients in span.items()}
    return generators, rows, padded


def _smith_invariants(rows: List[List[int]], columns: int) -> List[int]:
    if columns == 0:
        return []
    matrix = DomainMatrix([[ZZ(x) for x in row] for row in rows], (len(rows), columns), ZZ)
    factors = [abs(int(x)) for x in snf_invariant_factors(matrix)]
    if any(x == 0 for x in factors):
        raise InvariantViolation("Quotient G/D ist nicht endlich")
    return sorted(x for x in factors if x != 1)


@dataclass(frozen=True)
class ShaGroup:
    """
    Ш(K, K') = G/D für einen Primpotenz-Kontext.

    Koordinaten intern in sortierter Reihenfolge (e_1 ≥ ... ≥ e_m);
    factor_order bildet sortierte Positionen auf ursprüngliche Indizes ab.
    """
    p: int
    ambient_exponents: Tuple[int, ...]
    factor_order: Tuple[int, ...]
    generators: Tuple[TupleVec, ...]
    basis: Tuple[TupleVec, ...]
    invariant_factors: Tuple[int, ...]
    members: FrozenSet[TupleVec] = field(compare=False, repr=False)

    @property
    def moduli(self) -> Tuple[int, ...]:
        return _moduli(self.p, self.ambient_exponents)

    @property
    def zero(self) -> TupleVec:
        return tuple(0 for _ in self.ambient_exponents)

    @property
    def diagonal(self) -> TupleVec:
        return tuple(1 % m for m in self.moduli)

    @property
    def order(self) -> int:
        return reduce(mul, self.invariant_factors, 1)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @cached_property
    def _diagonal_multiples(self) -> Tuple[TupleVec, ...]:
        d = self.diagonal
        return tuple(_scale(k, d, self.moduli) for k in range(_order(d, self.moduli)))

    def contains(self, a: Sequence[int]) -> bool:
        return tuple(a) in self.members

    def canonical(self, a: Sequence[int]) -> TupleVec:
        """Kleinster Vertreter der Nebenklasse a + D"""
        a = tuple(a)
        return min(_add(a, shift, self.moduli) for shift in self._diagonal_multiples)

    def in_diagonal(self, a: Sequence[int]) -> bool:
        return self.canonical(a) == self.zero

    def coset_of(self, a: Sequence[int]) -> FrozenSet[TupleVec]:
        """Nebenklasse a + D als Menge"""
        a = tuple(a)
        return frozenset(_add(a, shift, self.moduli) for shift in self._diagonal_multiples)

    @cached_property
    def quotient_elements(self) -> Tuple[TupleVec, ...]:
        return tuple(sorted({self.canonical(a) for a in self.members}))

    @cached_property
    def basis_orders(self) -> Tuple[int, ...]:
        orders = []
        for b in self.basis:
            k, y = 1, self.canonical(b)
            while y != self.zero:
                y = self.canonical(_add(y, b, self.moduli))
                k += 1
            orders.append(k)
        return tuple(orders)

    @cached_property
    def _coordinate_table(self) -> Dict[TupleVec, Tuple[int, ...]]:
        table: Dict[TupleVec, Tuple[int, ...]] = {self.zero: tuple(0 for _ in self.basis)}
        for j, (b, order) in enumerate(zip(self.basis, self.basis_orders)):
            extended = {}
            for rep, coords in table.items():
                y = rep
                for k in range(order):
                    extended[self.canonical(y)] = coords[:j] + (k,) + coords[j + 1:]
                    y = _add(y, b, self.moduli)
            table = extended
        return table

    def quotient_coordinates(self, a: Sequence[int]) -> Tuple[int, ...]:
        """
        Koordinaten (k_j) von a + D in der Basis von G/D, k_j ∈ Z/d_j.

        Raises:
            WrongShape: a liegt nicht in G
        """
        if not self.contains(a):
            raise WrongShape(f"{tuple(a)} liegt nicht in G")
        return self._coordinate_table[self.canonical(a)]

    def to_original(self, a: Sequence[int]) -> TupleVec:
        return to_original(a, self.factor_order)

    def from_original(self, a: Sequence[int]) -> TupleVec:
        return to_sorted(a, self.factor_order)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "invariant_factors": list(self.invariant_factors),
            "generators": [list(self.to_original(b)) for b in self.basis],
            "ambient_exponents": list(to_original(self.ambient_exponents, self.factor_order)),
            "factor_order": list(self.factor_order),
        }

    @classmethod
    def trivial(cls, p: int, exps: Sequence[int], factor_order: Sequence[int]) -> "ShaGroup":
        zero = tuple(0 for _ in exps)
        moduli = _moduli(p, exps)
        diagonal = tuple(1 % m for m in moduli)
        members = frozenset(_scale(k, diagonal, moduli) for k in range(_order(diagonal, moduli)))
        generators = (diagonal,) if diagonal != zero else ()
        return cls(p, tuple(exps), tuple(factor_order), generators, (), (), members)


def _quotient_basis(group: ShaGroup) -> Tuple[Tuple[TupleVec, ...], Tuple[int, ...]]:
    """Basis von G/D aus Vertretern: jeweils maximale relative Ordnung mit direkter Summe"""
    moduli = group.moduli
    elements = group.quotient_elements
    zero = group.zero
    span = {zero}
    basis: List[TupleVec] = []
    orders: List[int] = []

    def shifted(a: TupleVec, b: TupleVec) -> TupleVec:
        return group.canonical(_add(a, b, moduli))

    while len(span) < len(elements):
        best: Optional[Tuple[int, TupleVec]] = None
        for z in elements:
            if z in span:
                continue
            relative, y = 1, z
            while y not in span:
                y = shifted(y, z)
                relative += 1
            if y != zero:
                continue
            if best is None or relative > best[0]:
                best = (relative, z)
        if best is None:
            raise InvariantViolation("Keine direkte Zerlegung von G/D gefunden")
        order, z = best
        extended = set()
        multiple = zero
        for _ in range(order):
            for s in span:
                extended.add(shifted(s, multiple))
            multiple = shifted(multiple, z)
        span = extended
        basis.append(z)
        orders.append(order)
    return tuple(basis), tuple(orders)


def compute_sha_prime_power(profile: SplittingProfile, limits: Optional[ComputationLimits] = None) -> ShaGroup:
    """
    Ш(K, K') = G/D aus einem Profil.

    Raises:
        AmbientTooLarge: ⊕ Z/p^{e_i}Z überschreitet die Grenze
    """
    p, exps = profile.p, profile.exps
    if not exps or all(e == 0 for e in exps):
        return ShaGroup.trivial(p, exps, profile.factor_order)
    moduli = _moduli(p, exps)
    members = enumerate_G(profile, limits)
    member_set = frozenset(members)
    diagonal = tuple(1 % m for m in moduli)
    if diagonal not in member_set:
        raise InvariantViolation("Diagonale liegt nicht in G")

    generators, rows, coefficients = _presentation(members, moduli)
    if set(coefficients) != member_set:
        raise InvariantViolation("G ist nicht unter Addition abgeschlossen")
    rows.append(list(coefficients[diagonal]))
    factors = _smith_invariants(rows, len(generators))

    draft = ShaGroup(p, tuple(exps), tuple(profile.factor_order), tuple(generators), (), tuple(factors), member_set)
    basis, orders = _quotient_basis(draft)
    if sorted(orders) != factors or draft.order != len(draft.quotient_elements):
        raise InvariantViolation(
            f"Smith-Normalform {factors} passt nicht zur Basis mit Ordnungen {sorted(orders)}"
        )
    group = ShaGroup(p, tuple(exps), tuple(profile.factor_order), tuple(generators), basis, tuple(factors), member_set)
    logger.info(f"Ш berechnet: p={p}, |G|={len(members)}, Invarianten {list(factors)}")
    return group


# ---------------------------------------------------------------------------
# F, π und die exakte Sequenz
# ---------------------------------------------------------------------------

def F_map(profile: SplittingProfile, profile0: SplittingProfile, b: Sequence[int]) -> TupleVec:
    """Einbettung ⊕ Z/p^{f_i} -> ⊕ Z/p^{e_i}, komponentenweise Multiplikation mit p^{e_i - f_i}"""
    p = profile.p
    e_orig = to_original(profile.exps, profile.factor_order)
    f_orig = to_original(profile0.exps, profile0.factor_order)
    b_orig = to_original(b, profile0.factor_order)
    image = []
    for e_i, f_i, b_i in zip(e_orig, f_orig, b_orig):
        if f_i > e_i or (e_i != 0 and e_i != f_i + 1):
            raise WrongShape(f"Exponenten f_i = {f_i}, e_i = {e_i} passen nicht zusammen")
        image.append(b_i * p ** (e_i - f_i) % p ** e_i)
    return to_sorted(image, profile.factor_order)


def pi_map(profile: SplittingProfile, a: Sequence[int]) -> TupleVec:
    """Reduktion auf ⊕ Z/p^{r_i}Z mit r_i = min(1, e_i)"""
    return tuple(x % profile.p ** min(1, e) for x, e in zip(a, profile.exps))


def compute_sha_relative(profile: SplittingProfile, limits: Optional[ComputationLimits] = None) -> ShaGroup:
    """Ш(K/K_0, K') über das relative Profil"""
    return compute_sha_prime_power(relative_profile(profile), limits)


@dataclass
class ExactSequenceReport:
    """Prüfergebnis für 0 -> Ш(K_0,K') -> Ш(K,K') -> Ш(K/K_0,K') -> 0"""
    order: int
    order_zero: int
    order_relative: int
    f_lands_in_G: bool
    f_injective: bool
    pi_lands_in_G: bool
    pi_surjective: bool
    image_equals_kernel: bool
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def cardinality_identity(self) -> bool:
        return self.order == self.order_zero * self.order_relative

    @property
    def holds(self) -> bool:
        return all([
            self.f_lands_in_G, self.f_injective, self.pi_lands_in_G,
            self.pi_surjective, self.image_equals_kernel, self.cardinality_identity,
        ])


def verify_exact_sequence(
    profile: SplittingProfile,
    profile0: Optional[SplittingProfile],
    limits: Optional[ComputationLimits] = None,
) -> ExactSequenceReport:
    """
    Prüft F injektiv, π surjektiv, Bild F = Kern π und die Kardinalitätsformel.
    profile0 = None steht für K_0 = Q (e = 1), dort ist Ш(K_0, K') trivial.
    """
    sha = compute_sha_prime_power(profile, limits)
    rel = compute_sha_relative(profile, limits)
    if profile0 is None:
        zero_members = [sha.zero]
        zero_quotient = [sha.zero]
        order_zero = 1

        def embed(b):
            return sha.zero
    else:
        sha0 = compute_sha_prime_power(profile0, limits)
        zero_members = sorted(sha0.members)
        zero_quotient = list(sha0.quotient_elements)
        order_zero = sha0.order

        def embed(b):
            return F_map(profile, profile0, b)

    f_lands = all(sha.contains(embed(b)) for b in zero_members)
    f_injective = all(
        not sha.in_diagonal(embed(b)) for b in zero_quotient if any(b)
    )
    projected = {a: pi_map(profile, a) for a in sha.members}
    pi_lands = all(rel.contains(x) for x in projected.values())
    pi_surjective = {rel.canonical(x) for x in projected.values()} == set(rel.quotient_elements)
    image = {sha.canonical(embed(b)) for b in zero_members}
    kernel = {sha.canonical(a) for a, x in projected.items() if rel.in_diagonal(x)}
    report = ExactSequenceReport(
        order=sha.order,
        order_zero=order_zero,
        order_relative=rel.order,
        f_lands_in_G=f_lands,
        f_injective=f_injective,
        pi_lands_in_G=pi_lands,
        pi_surjective=pi_surjective,
        image_equals_kernel=image == kernel,
    )
    logger.debug(f"Exakte Sequenz: |Ш|={report.order}, |Ш_0|={order_zero}, |Ш_rel|={rel.order}, gilt={report.holds}")
    return report


def relative_into_prim(rel_group: ShaGroup, prim_group: ShaGroup) -> Dict[TupleVec, TupleVec]:
    """
    Einbettung Ш(K/K_0, K') -> Ш(K_prim, K') auf Vertretern.

    Vertreter werden auf die Koordinaten mit e_i = e eingeschränkt; das sind genau
    die Koordinaten mit Exponent 1 im K_prim-Kontext. Koordinaten mit 1 ≤ e_i < e
    (K_prim ⊆ K_i) fallen weg.

    Raises:
        WrongShape: p oder Faktorzahl verschieden, oder Exponent 1 im K_prim-Kontext
            an einer Koordinate mit e_i = 0
        InvariantViolation: Bild nicht in G(K_prim, K') oder Abbildung nicht injektiv
    """
    if rel_group.p != prim_group.p or len(rel_group.ambient_exponents) != len(prim_group.ambient_exponents):
        raise WrongShape("Relative Gruppe und K_prim-Gruppe gehören nicht zum selben Kontext")
    rel_exps = to_original(rel_group.ambient_exponents, rel_group.factor_order)
    prim_exps = to_original(prim_group.ambient_exponents, prim_group.factor_order)
    if any(f > r for f, r in zip(prim_exps, rel_exps)):
        raise WrongShape(f"Exponenten {prim_exps} passen nicht unter {rel_exps}")
    mapping: Dict[TupleVec, TupleVec] = {}
    preimages: Dict[TupleVec, TupleVec] = {}
    for c in rel_group.quotient_elements:
        restricted = tuple(x if f else 0 for x, f in zip(rel_group.to_original(c), prim_exps))
        image = prim_group.from_original(restricted)
        if not prim_group.contains(image):
            raise InvariantViolation(f"Bild von {c} liegt nicht in G(K_prim, K')")
        target = prim_group.canonical(image)
        if target in preimages:
            raise InvariantViolation(f"Einbettung nicht injektiv: {preimages[target]} und {c} haben dasselbe Bild")
        preimages[target] = c
        mapping[c] = target
    logger.debug(f"Ш(K/K_0, K') -> Ш(K_prim, K'): {len(mapping)} Klassen, Exponenten {rel_exps} -> {prim_exps}")
    return mapping


# ---------------------------------------------------------------------------
# Partitionsansicht (e = 1)
# ---------------------------------------------------------------------------

def partition_of(profile: SplittingProfile, a: Sequence[int]) -> Partition:
    """(J_0, ..., J_{p-1}) mit J_n = {i ∈ J : a_i = n}, Indizes in ursprünglicher Reihenfolge"""
    return tuple(
        frozenset(profile.factor_order[k] for k, (x, e) in enumerate(zip(a, profile.exps)) if e == 1 and x == n)
        for n in range(profile.p)
    )


def partition_to_vector(profile: SplittingProfile, partition: Partition) -> TupleVec:
    vector = [0] * profile.m
    for n, block in enumerate(partition):
        for index in block:
            vector[profile.factor_order.index(index)] = n
    return tuple(vector)


def partition_view(profile: SplittingProfile, limits: Optional[ComputationLimits] = None) -> List[Partition]:
    """G als Liste von Partitionen von J = {i : e_i = 1}"""
    if profile.e != 1:
        raise WrongExponent(f"Partitionsansicht nur für e = 1, hier e = {profile.e}")
    return [partition_of(profile, a) for a in enumerate_G(profile, limits)]


def relative_partition_view(profile: SplittingProfile, limits: Optional[ComputationLimits] = None) -> List[Partition]:
    return partition_view(relative_profile(profile), limits)


def coarsen_partition(partition: Partition, n: int) -> Partition:
    """Zwei Blöcke: J_n und die Vereinigung der übrigen"""
    if not 0 <= n < len(partition):
        raise WrongShape(f"Block {n} existiert nicht")
    rest = frozenset().union(*(block for k, block in enumerate(partition) if k != n))
    return (partition[n], rest) + tuple(frozenset() for _ in range(len(partition) - 2))


# ---------------------------------------------------------------------------
# Pipeline über alle Primteiler
# ---------------------------------------------------------------------------

@dataclass
class ShaDecomposition:
    """Ш(L) = ⊕_p Ш(K(p), K') mit beschrifteten Komponenten"""
    pivot_index: int
    components: Dict[int, ShaGroup]
    contexts: Dict[int, Context] = field(default_factory=dict, repr=False)
    profiles: Dict[int, Optional[SplittingProfile]] = field(default_factory=dict, repr=False)

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return tuple(sorted(x for group in self.components.values() for x in group.invariant_factors))

    @property
    def order(self) -> int:
        return reduce(mul, self.invariant_factors, 1)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def to_dict(self) -> Dict[str, Any]:
        return {
            "invariant_factors": list(self.invariant_factors),
            "pivot": self.pivot_index,
            "components": {str(p): group.to_dict() for p, group in sorted(self.components.items())},
        }


def compute_sha(
    L: Sequence[AbelianFieldQ],
    pivot_index: int,
    limits: Optional[ComputationLimits] = None,
) -> ShaDecomposition:
    """
    Ш(L) für L = K × K' mit zyklischem Pivot K = L[pivot_index].

    Raises:
        NoCyclicFactor: Pivot nicht zyklisch
    """
    limits = resolve_limits(limits)
    if not 0 <= pivot_index < len(L):
        raise WrongShape(f"Pivot-Index {pivot_index} außerhalb von 0..{len(L) - 1}")
    pivot = L[pivot_index]
    if not pivot.is_cyclic():
        raise NoCyclicFactor(f"Faktor {pivot_index} ({pivot}) ist nicht zyklisch")
    others = [f for k, f in enumerate(L) if k != pivot_index]
    result = ShaDecomposition(pivot_index=pivot_index, components={})
    for p in sorted(int(q) for q in factorint(pivot.degree)):
        ctx = make_context(prime_power_part(pivot, p), others)
        result.contexts[p] = ctx
        if ctx.m == 0 or all(e == 0 for e in ctx.exps):
            result.components[p] = ShaGroup.trivial(p, ctx.exps, ctx.factor_order)
            result.profiles[p] = None
            continue
        profile = build_profile(ctx, limits.granularity, limits)
        result.profiles[p] = profile
        result.components[p] = compute_sha_prime_power(profile, limits)
    logger.info(f"Ш(L) mit Pivot {pivot_index}: Invarianten {list(result.invariant_factors)}")
    return result


def sha_certificate(decomposition: ShaDecomposition) -> Dict[str, Any]:
    """
    Nachweis je Komponente: |G|, Invarianten der Smith-Normalform und für
    jeden Erzeuger von G/D das kleinste überdeckende n je Klassentyp.

    Raises:
        InvariantViolation: ein Erzeuger wird von einem Klassentyp nicht überdeckt
    """
    components: Dict[str, Any] = {}
    for p, group in sorted(decomposition.components.items()):
        profile = decomposition.profiles.get(p)
        witnesses = []
        for b, order in zip(group.basis, group.basis_orders):
            covering = []
            if profile is not None:
                for exponents in profile.class_types:
                    values = covering_values(p, profile.exps, b, exponents)
                    if not values:
                        raise InvariantViolation(f"Erzeuger {b} wird vom Klassentyp {exponents} nicht überdeckt")
                    covering.append({"exponents": list(to_original(exponents, group.factor_order)), "n": values[0]})
            witnesses.append({"generator": list(group.to_original(b)), "order": order, "covering": covering})
        components[str(p)] = {
            "group_order": len(group.members),
            "invariant_factors": list(group.invariant_factors),
            "class_types": len(profile.class_types) if profile is not None else 0,
            "witnesses": witnesses,
        }
    return {"pivot": decomposition.pivot_index, "components": components}
