#!/usr/bin/env python3
"""
Oracle Module
Unabhängige Gegenprüfungen: Suche nach globalen Lösungen von N_{L/Q}(t) = c für
Q, quadratische und biquadratische Faktoren und Stichprüfungen der Stellenklassen
an echten Primzahlen
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, isqrt, prod
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging

from sympy import factorint, legendre_symbol, multiplicity, nextprime, primerange, symbols
from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic

from core.abelian_q import (
    AbelianFieldQ,
    as_fraction,
    quadratic_radicand,
    quadratic_subfields,
    residue_degree,
)
from core.architecture import ComputationLimits, VerdictKind, resolve_limits
from core.brauer import decide
from core.errors import (
    InvariantViolation,
    Mismatch,
    SearchSpaceTooLarge,
    UnsupportedDegree,
    WrongShape,
    ZeroInput,
)
from core.splitting import SplittingProfile, log_p

logger = logging.getLogger(__name__)

METHODS = ("exhaustive", "norm_classes")
MAX_CANDIDATES = 10 ** 6
STAGES = (10, 100, 1000)

X, Y, Z = symbols("x y z", integer=True)


# ---------------------------------------------------------------------------
# Hilbert-Symbole
# ---------------------------------------------------------------------------

def _split(a: int, p: int) -> Tuple[int, int]:
    alpha = int(multiplicity(p, abs(a)))
    return alpha, a // p ** alpha


def hilbert_symbol(a: int, b: int, v: Optional[int]) -> int:
    """(a, b)_v für ganze a, b ≠ 0; v = None steht für ∞"""
    if a == 0 or b == 0:
        raise ZeroInput("Hilbert-Symbol mit 0")
    if v is None:
        return -1 if a < 0 and b < 0 else 1
    alpha, u = _split(a, v)
    beta, w = _split(b, v)
    if v == 2:
        eps_u, eps_w = (u % 4 == 3), (w % 4 == 3)
        omega_u, omega_w = (u % 8 in (3, 5)), (w % 8 in (3, 5))
        exponent = eps_u * eps_w + alpha * omega_w + beta * omega_u
        return -1 if exponent % 2 else 1
    sign = -1 if (alpha * beta * ((v - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= int(legendre_symbol(u % v, v))
    if alpha % 2:
        sign *= int(legendre_symbol(w % v, v))
    return sign


# ---------------------------------------------------------------------------
# F_2-Lineare Algebra auf Bitmasken
# ---------------------------------------------------------------------------

def _kernel(rows: Sequence[int]) -> List[int]:
    """Kombinationen (Bitmasken über rows), deren XOR verschwindet"""
    reduced: Dict[int, Tuple[int, int]] = {}
    kernel = []
    for k, row in enumerate(rows):
        combo = 1 << k
        while row:
            top = row.bit_length() - 1
            if top not in reduced:
                reduced[top] = (row, combo)
                break
            pivot_row, pivot_combo = reduced[top]
            row ^= pivot_row
            combo ^= pivot_combo
        if not row:
            kernel.append(combo)
    return kernel


def _solve(generators: Sequence[int], target: int) -> Optional[int]:
    """Bitmaske über generators, deren XOR target ergibt, oder None"""
    reduced: Dict[int, Tuple[int, int]] = {}
    for k, vector in enumerate(generators):
        combo = 1 << k
        while vector:
            top = vector.bit_length() - 1
            if top not in reduced:
                reduced[top] = (vector, combo)
                break
            pivot_vector, pivot_combo = reduced[top]
            vector ^= pivot_vector
            combo ^= pivot_combo
    combo = 0
    while target:
        top = target.bit_length() - 1
        if top not in reduced:
            return None
        pivot_vector, pivot_combo = reduced[top]
        target ^= pivot_vector
        combo ^= pivot_combo
    return combo


# ---------------------------------------------------------------------------
# Globale Lösungssuche
# ---------------------------------------------------------------------------

Shape = Tuple[int, ...]
Element = Tuple[Fraction, ...]


def element_norm(shape: Shape, coords: Sequence[Fraction]) -> Fraction:
    """
    Norm nach Q von t in der Basis 1 | 1, √D | 1, √a, √b, √a√b.

    Für Q(√a, √b) ist N(t) = P² − aQ² mit P = x0² + a·x1² − b·x2² − ab·x3²
    und Q = 2·x0·x1 − 2b·x2·x3.
    """
    if not shape:
        return Fraction(coords[0])
    if len(shape) == 1:
        x, y = coords
        return Fraction(x * x - shape[0] * y * y)
    a, b = shape
    x0, x1, x2, x3 = coords
    P = x0 * x0 + a * x1 * x1 - b * x2 * x2 - a * b * x3 * x3
    Q = 2 * x0 * x1 - 2 * b * x2 * x3
    return Fraction(P * P - a * Q * Q)


def field_shape(K: AbelianFieldQ) -> Shape:
    """Radikanden der Basis: () für Q, (D,) quadratisch, (a, b) biquadratisch"""
    if K.degree == 1:
        return ()
    if K.degree == 2:
        return (quadratic_radicand(K),)
    if K.degree == 4 and not K.is_cyclic():
        a, b = (quadratic_radicand(F) for F in quadratic_subfields(K)[:2])
        return (a, b)
    raise UnsupportedDegree(f"{K} ist weder Q noch quadratisch noch biquadratisch")


def _unit(shape: Shape) -> Element:
    return (Fraction(1),) + (Fraction(0),) * len(shape)


@dataclass
class NormSolution:
    """t = (t_1, ..., t_n) in den Koordinaten aus field_shape mit Π N(t_i) = c"""
    c: Fraction
    shapes: List[Shape]
    elements: List[Element]
    bound: int = 0
    method: str = "exhaustive"

    def norms(self) -> List[Fraction]:
        return [element_norm(shape, t) for shape, t in zip(self.shapes, self.elements)]

    def norm_product(self) -> Fraction:
        total = Fraction(1)
        for n in self.norms():
            total *= n
        return total

    def to_dict(self) -> Dict[str, Any]:
        return {
            "c": str(self.c),
            "method": self.method,
            "bound": self.bound,
            "elements": [
                {"radicands": list(shape), "coordinates": [str(x) for x in t]}
                for shape, t in zip(self.shapes, self.elements)
            ],
        }


# Erschöpfende Suche

def _candidates(shape: Shape, bound: int, denominator_bound: int) -> List[Element]:
    """Von 0 verschiedene (x_0, ..., x_k)/z in lexikographischer Reihenfolge (z, x)"""
    pool = []
    for z in range(1, denominator_bound + 1):
        for coords in product(range(-bound, bound + 1), repeat=len(shape) + 1):
            if any(coords) and gcd(z, *coords) == 1:
                pool.append(tuple(Fraction(x, z) for x in coords))
    return pool


def _scan(
    c: Fraction,
    norms: List[List[Fraction]],
    pools: List[List[Element]],
    last: Dict[Fraction, Element],
    chunk: range,
) -> Optional[List[Element]]:
    """Erster Treffer, dessen äußerster Faktor in chunk liegt"""
    middle = [range(len(pool)) for pool in pools[1:-1]]
    for i in chunk:
        for rest in product(*middle):
            value = norms[0][i]
            for k, j in enumerate(rest, start=1):
                value *= norms[k][j]
            hit = last.get(c / value)
            if hit is not None:
                return [pools[0][i]] + [pools[k][j] for k, j in enumerate(rest, start=1)] + [hit]
    return None


def _exhaustive_search(
    shapes: List[Shape],
    c: Fraction,
    bound: int,
    denominator_bound: int,
    limits: ComputationLimits,
    max_candidates: int,
) -> Optional[List[Element]]:
    sizes = [denominator_bound * (2 * bound + 1) ** (len(shape) + 1) for shape in shapes]
    work = prod(sizes[:-1]) + sizes[-1]
    if work > max_candidates:
        raise SearchSpaceTooLarge(
            f"{work} Kandidaten bei Höhe {bound}, erlaubt sind {max_candidates}",
            {"candidates": work, "max_candidates": max_candidates},
        )
    pools = [_candidates(shape, bound, denominator_bound) for shape in shapes]

    # letzter Faktor: Norm -> lexikographisch erstes Element
    last: Dict[Fraction, Element] = {}
    for t in pools[-1]:
        last.setdefault(element_norm(shapes[-1], t), t)
    if len(shapes) == 1:
        hit = last.get(c)
        return None if hit is None else [hit]

    norms = [[element_norm(shape, t) for t in pool] for shape, pool in zip(shapes[:-1], pools[:-1])]
    outer = range(len(pools[0]))
    workers = max(1, limits.max_workers)
    if workers == 1:
        return _scan(c, norms, pools, last, outer)

    size = -(-len(outer) // (4 * workers))
    chunks = [outer[k:k + size] for k in range(0, len(outer), size)]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(_scan, c, norms, pools, last, chunk) for chunk in chunks]
        # Blöcke in Reihenfolge auswerten, damit der erste Treffer deterministisch ist
        for future in futures:
            result = future.result()
            if result is not None:
                for pending in futures:
                    pending.cancel()
                return result
    return None


# Normklassen

def _squarefree_part(c: Fraction) -> Tuple[int, Fraction]:
    """c = c' · r² mit quadratfreiem ganzem c'"""
    value = c.numerator * c.denominator
    core = -1 if value < 0 else 1
    for q, k in factorint(abs(value)).items():
        if k % 2:
            core *= int(q)
    r_squared = c / core
    r = Fraction(isqrt(r_squared.numerator), isqrt(r_squared.denominator))
    if r * r != r_squared:
        raise InvariantViolation(f"{c} / {core} ist kein Quadrat")
    return core, r


def _vector(s: int, index: Dict[int, int]) -> int:
    """Bitvektor von s modulo Quadraten: Bit 0 ist das Vorzeichen"""
    bits = 1 if s < 0 else 0
    for q, k in factorint(abs(s)).items():
        if k % 2:
            bits |= 1 << index[int(q)]
    return bits


def _norm_group_basis(D: int, basis: Sequence[int]) -> List[int]:
    """
    Normen aus Q(√D) mit Träger in basis als Kombinationen: s ist Norm genau dann,
    wenn (s, D)_v = 1 an allen Stellen v.
    """
    places: List[Optional[int]] = [None, 2] + sorted(int(q) for q in factorint(abs(D)) if q != 2)
    place_bit = {v: k for k, v in enumerate(places)}
    rows = []
    for b in basis:
        candidates = list(places)
        if b > 0:
            place_bit.setdefault(b, len(place_bit))
            candidates.append(b)
        row = 0
        for v in dict.fromkeys(candidates):
            if hilbert_symbol(b, D, v) == -1:
                row |= 1 << place_bit[v]
        rows.append(row)
    return _kernel(rows)


def _represent(s: int, D: int) -> Element:
    """(a, b) mit a² − D b² = s"""
    if s == 1:
        return Fraction(1), Fraction(0)
    x, y, z = diop_ternary_quadratic(X ** 2 - D * Y ** 2 - s * Z ** 2)
    if z is None or z == 0:
        raise InvariantViolation(f"x² − {D}y² = {s}z² ohne Lösung, obwohl alle Hilbert-Symbole trivial sind")
    return Fraction(int(x), int(z)), Fraction(int(y), int(z))


def _support_stages(bound: int) -> List[int]:
    return sorted({s for s in STAGES if s < bound} | {bound})


def _norm_class_search(
    shapes: List[Shape],
    c: Fraction,
    bound: int,
    limits: ComputationLimits,
) -> Optional[NormSolution]:
    """
    Setzt c aus Normklassen mit Trägern aus den Primzahlen ≤ bound (plus den
    Primteilern von c und der Radikanden) zusammen; biquadratische Faktoren
    tragen nur t = 1 bei.
    """
    if all(len(shape) == 2 for shape in shapes):
        raise UnsupportedDegree("Normklassen brauchen mindestens einen Faktor vom Grad ≤ 2")
    elements = [_unit(shape) for shape in shapes]

    if () in shapes:
        elements[shapes.index(())] = (c,)
        return _verified(NormSolution(c, shapes, elements, 0, "norm_classes"))

    core, r = _squarefree_part(c)
    quadratic = [j for j, shape in enumerate(shapes) if len(shape) == 1]
    fixed_primes = {int(q) for q in factorint(abs(core))}
    for j in quadratic:
        fixed_primes.update(int(q) for q in factorint(abs(shapes[j][0])))
    fixed_primes.add(2)

    for stage in _support_stages(bound):
        primes = sorted(fixed_primes | {int(q) for q in primerange(2, stage + 1)})
        basis = [-1] + primes
        index = {q: k + 1 for k, q in enumerate(primes)}
        with ThreadPoolExecutor(max_workers=max(1, limits.max_workers)) as executor:
            kernels = list(executor.map(lambda j: _norm_group_basis(shapes[j][0], basis), quadratic))
        generators = [(j, combo) for j, kernel in zip(quadratic, kernels) for combo in kernel]
        combo = _solve([g for _, g in generators], _vector(core, index))
        if combo is None:
            logger.debug(f"Stufe {stage}: c' = {core} nicht im Erzeugnis der Normklassen")
            continue
        parts = {j: 0 for j in quadratic}
        for k, (j, g) in enumerate(generators):
            if combo >> k & 1:
                parts[j] ^= g
        product_s = 1
        for j in quadratic:
            s = 1
            for k, b in enumerate(basis):
                if parts[j] >> k & 1:
                    s *= b
            product_s *= s
            elements[j] = _represent(s, shapes[j][0])
        q = isqrt(product_s * core)
        if q * q != product_s * core:
            raise InvariantViolation(f"Π s_j = {product_s} und c' = {core} unterscheiden sich nicht um ein Quadrat")
        scale = Fraction(core) * r / q
        a, b = elements[quadratic[0]]
        elements[quadratic[0]] = (a * scale, b * scale)
        logger.info(f"Lösung für c = {c} mit Träger bis {stage} gefunden")
        return _verified(NormSolution(c, shapes, elements, stage, "norm_classes"))

    logger.warning(f"Keine Lösung für c = {c} bis Trägerschranke {bound} (ergebnislos)")
    return None


def norm_solution_search(
    L: Sequence[AbelianFieldQ],
    c,
    bound: int,
    limits: Optional[ComputationLimits] = None,
    method: str = "exhaustive",
    denominator_bound: int = 1,
    max_candidates: int = MAX_CANDIDATES,
) -> Optional[NormSolution]:
    """
    Sucht t mit N_{L/Q}(t) = c.

    exhaustive: alle t_i = (x_0 + x_1·√a + ...)/z mit |x_j| ≤ bound und
    1 ≤ z ≤ denominator_bound, lexikographisch geordnet nach Faktor, dann z,
    dann Koordinaten. Geliefert wird die erste Lösung in dieser Reihenfolge.
    norm_classes: schneller Weg über Normklassen, bound ist dann die Trägerschranke.

    Returns:
        Lösung oder None (ergebnislos bis zur Schranke, keine Widerlegung)

    Raises:
        UnsupportedDegree: Faktor weder Q noch quadratisch noch biquadratisch
        SearchSpaceTooLarge: mehr als max_candidates Kandidaten
        WrongShape: Schranke < 1, unbekannte Methode oder leeres L
    """
    if bound < 1 or denominator_bound < 1:
        raise WrongShape(f"Schranken {bound}, {denominator_bound} müssen ≥ 1 sein")
    if method not in METHODS:
        raise WrongShape(f"Unbekannte Suchmethode: {method}")
    if not L:
        raise WrongShape("Mindestens ein Faktor erforderlich")
    c = as_fraction(c)
    if c == 0:
        raise ZeroInput("c = 0 ist nicht zulässig")
    limits = resolve_limits(limits)
    shapes = [field_shape(K) for K in L]

    if method == "norm_classes":
        return _norm_class_search(shapes, c, bound, limits)

    elements = _exhaustive_search(shapes, c, bound, denominator_bound, limits, max_candidates)
    if elements is None:
        logger.warning(f"Keine Lösung für c = {c} bis Höhe {bound} (ergebnislos)")
        return None
    logger.info(f"Lösung für c = {c} bis Höhe {bound} gefunden")
    return _verified(NormSolution(c, shapes, elements, bound, method))


def _verified(solution: NormSolution) -> NormSolution:
    if solution.norm_product() != solution.c:
        raise InvariantViolation(f"Normprodukt {solution.norm_product()} ≠ c = {solution.c}")
    return solution


def cross_check_verdict(
    L: Sequence[AbelianFieldQ],
    pivot: int,
    c,
    bound: int,
    limits: Optional[ComputationLimits] = None,
    method: str = "exhaustive",
    denominator_bound: int = 1,
) -> Dict[str, Any]:
    """
    Vergleicht decide mit der Lösungssuche. Obstruiert und gefunden ist ein
    harter Widerspruch; lösbar und nicht gefunden bleibt ergebnislos.
    """
    verdict = decide(L, pivot, c, limits)
    solution = norm_solution_search(L, c, bound, limits, method, denominator_bound)
    if verdict.kind != VerdictKind.SOLVABLE and solution is not None:
        raise InvariantViolation(f"c = {c}: Entscheidung {verdict.kind.value}, aber Lösung gefunden")
    status = "consistent" if (solution is not None) == (verdict.kind == VerdictKind.SOLVABLE) else "inconclusive"
    return {
        "verdict": verdict.kind.value,
        "method": method,
        "bound": bound,
        "found": solution is not None,
        "status": status,
        "solution": solution.to_dict() if solution is not None else None,
    }


# ---------------------------------------------------------------------------
# Stichprüfungen der Stellenklassen
# ---------------------------------------------------------------------------

@dataclass
class SpotCheckReport:
    """Ergebnis einer Stichprüfung an unverzweigten Primzahlen"""
    budget: int
    checked: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {"budget": self.budget, "checked": len(self.checked), "passed": True}


def spot_check_profile(profile: SplittingProfile, budget: int) -> SpotCheckReport:
    """
    Prüft für die ersten budget Primzahlen q ∤ N den Exponentenvektor der Klasse
    von q gegen die Restklassengrade f_i: e_{i,q} = log_p |⟨q^{f_i}⟩ in Gal(K/Q)|.

    Raises:
        Mismatch: mit der ersten abweichenden Primzahl
        WrongShape: Profil ohne Kontext
    """
    ctx = profile.context
    if ctx is None:
        raise WrongShape("Stichprüfung braucht ein Profil mit Kontext")
    report = SpotCheckReport(budget)
    q = 1
    while len(report.checked) < budget:
        q = int(nextprime(q))
        if ctx.modulus % q == 0:
            continue
        original = []
        for K_i in ctx.factors:
            f = residue_degree(K_i, q)
            original.append(log_p(ctx.pivot.quotient_order(pow(q, f, ctx.pivot.modulus)), ctx.p))
        expected = tuple(original[i] for i in ctx.factor_order)
        pivot_exp = log_p(ctx.pivot.quotient_order(q % ctx.pivot.modulus), ctx.p)
        cls = profile.class_for_prime(q)
        if cls.exponents != expected or cls.pivot_exp != pivot_exp:
            raise Mismatch(
                f"Primzahl {q}: Profil {cls.exponents}/{cls.pivot_exp}, direkt {expected}/{pivot_exp}", q
            )
        report.checked.append(q)
    logger.info(f"Stichprüfung bestanden: {len(report.checked)} Primzahlen")
    return report
