#!/usr/bin/env python3
"""
Sha Core Tests
Dominanz, Indexmengen, G/D, exakte Sequenz und Partitionen
"""

import random
import unittest

from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import factorint, totient

from core.abelian_q import cyclotomic_field, cyclotomic_subfield, quadratic_field
from core.architecture import ComputationLimits, Granularity
from core.errors import AmbientTooLarge, BadDegree, FieldSpecError, NoCyclicFactor, NotCoherent, WrongExponent, WrongShape
from core.sha_core import (
    ShaGroup,
    coarsen_partition,
    coherence_check,
    compute_sha,
    compute_sha_prime_power,
    compute_sha_relative,
    covering_values,
    delta,
    dominates,
    enumerate_G,
    index_tuple,
    invert_I,
    membership_G,
    partition_of,
    partition_to_vector,
    partition_view,
    relative_into_prim,
    relative_partition_view,
    sha_certificate,
    verify_exact_sequence,
)
from core.splitting import build_profile, import_profile, kprim_context, kzero_context, make_context
from schema.validate_input import SHA_GROUP_SCHEMA, validate_json_schema


@st.composite
def exponent_vectors(draw):
    """(p, exps, a) mit absteigenden Exponenten und a ∈ ⊕ Z/p^{e_i}"""
    p = draw(st.sampled_from([2, 3]))
    exps = sorted(draw(st.lists(st.integers(min_value=0, max_value=2), min_size=1, max_size=4)), reverse=True)
    a = tuple(draw(st.integers(min_value=0, max_value=p ** e - 1)) for e in exps)
    return p, tuple(exps), a


def random_prime_power_context(rng):
    """Zyklischer Pivot vom Grad p^e (p = 2: e ≤ 3, p = 3: e ≤ 2) mit 1 bis 4 Faktoren"""
    p = rng.choice([2, 3])
    if p == 2:
        pivots = {
            1: [quadratic_field(5), quadratic_field(-3), quadratic_field(13)],
            2: [cyclotomic_subfield(5, 4), cyclotomic_subfield(13, 4)],
            3: [cyclotomic_subfield(17, 8)],
        }
        pool = [quadratic_field(D) for D in (-1, 2, -3, 5, 13, 17, -7)]
        pool += [cyclotomic_subfield(5, 4), cyclotomic_subfield(13, 4)]
        e = rng.randint(1, 3)
    else:
        pivots = {
            1: [cyclotomic_subfield(7, 3), cyclotomic_subfield(9, 3)],
            2: [cyclotomic_subfield(19, 9)],
        }
        pool = [cyclotomic_subfield(7, 3), cyclotomic_subfield(9, 3), cyclotomic_subfield(13, 3), quadratic_field(-3)]
        e = rng.randint(1, 2)
    factors = [rng.choice(pool) for _ in range(rng.randint(1, 4))]
    return make_context(rng.choice(pivots[e]), factors)


def example_profile(granularity=Granularity.RESIDUE):
    ctx = make_context(quadratic_field(13), [quadratic_field(17), quadratic_field(221)])
    return build_profile(ctx, granularity)


class TestDominance(unittest.TestCase):
    """Tests für Dominanz, δ und I"""

    def test_dominates(self):
        """Test x ≽ y"""
        print("🔧 Teste Dominanz...")
        self.assertTrue(dominates(5, 3, 1, 2, 2))
        self.assertFalse(dominates(5, 3, 3, 2, 2))
        self.assertFalse(dominates(1, 1, 1, 2, 2))
        self.assertTrue(dominates(7, 2, 0, 0, 3))
        print("✅ Dominanz funktioniert")

    def test_delta(self):
        """Test δ"""
        self.assertEqual(delta(5, 3, 1, 2, 2), 2)
        self.assertEqual(delta(3, 2, 1, 2, 2), 1)
        self.assertEqual(delta(0, 2, 1, 2, 2), 0)
        self.assertEqual(delta(4, 2, 1, 1, 3), 1)

    @settings(max_examples=80, deadline=None)
    @given(exponent_vectors())
    def test_invert_I_round_trip(self, data):
        """Test I^{-1}(I(a)) = a"""
        p, exps, a = data
        sets = index_tuple(a, p, exps)
        self.assertTrue(coherence_check(sets, p, exps))
        self.assertEqual(invert_I(sets, p, exps), a)

    def test_not_coherent(self):
        """Test inkohärente Tupel werden abgelehnt"""
        print("🔧 Teste inkohärente Tupel...")
        exps = (1, 1)
        with self.assertRaises(NotCoherent):
            invert_I((frozenset({0, 1}), frozenset({1})), 2, exps)
        with self.assertRaises(NotCoherent):
            invert_I((frozenset({0}), frozenset()), 2, exps)
        with self.assertRaises(NotCoherent):
            invert_I((frozenset({0, 1}),), 2, exps)
        print("✅ Inkohärente Tupel werden abgelehnt")

    def test_covering_values(self):
        """Test überdeckende Werte n"""
        self.assertEqual(covering_values(2, (1, 1), (1, 0), (1, 0)), [1])
        self.assertEqual(covering_values(2, (1, 1), (1, 0), (0, 1)), [0])
        self.assertEqual(covering_values(2, (1, 1), (1, 0), (0, 0)), [0, 1])
        self.assertEqual(covering_values(2, (1, 1), (1, 0), (1, 1)), [])


class TestShaGroup(unittest.TestCase):
    """Tests für Ш(K, K') = G/D"""

    def setUp(self):
        """Setup mit Q(√13); Q(√17), Q(√221)"""
        self.profile = example_profile()
        self.sha = compute_sha_prime_power(self.profile)

    def test_example_group(self):
        """Test G = (Z/2)², Ш = Z/2"""
        print("🔧 Teste Ш für Q(√13) × Q(√17) × Q(√221)...")
        self.assertEqual(len(self.sha.members), 4)
        self.assertEqual(self.sha.invariant_factors, (2,))
        self.assertEqual(self.sha.order, 2)
        self.assertEqual(len(self.sha.quotient_elements), 2)
        self.assertEqual(self.sha.basis_orders, (2,))
        print("✅ Ш = Z/2Z")

    def test_granularity_independent(self):
        """Test RESIDUE und GALOIS liefern dieselbe Gruppe"""
        galois = compute_sha_prime_power(example_profile(Granularity.GALOIS))
        self.assertEqual(galois.invariant_factors, self.sha.invariant_factors)
        self.assertEqual(galois.members, self.sha.members)

    def test_quotient_coordinates(self):
        """Test Koordinaten in G/D"""
        print("🔧 Teste Koordinaten in G/D...")
        self.assertEqual(self.sha.quotient_coordinates((0, 0)), (0,))
        self.assertEqual(self.sha.quotient_coordinates((1, 1)), (0,))
        self.assertEqual(self.sha.quotient_coordinates((1, 0)), (1,))
        self.assertEqual(self.sha.quotient_coordinates((0, 1)), (1,))
        self.assertTrue(self.sha.in_diagonal((1, 1)))
        self.assertEqual(self.sha.coset_of((1, 0)), frozenset({(1, 0), (0, 1)}))
        self.assertEqual(self.sha.canonical((1, 0)), (0, 1))
        print("✅ Koordinaten korrekt")

    def test_membership(self):
        """Test Zugehörigkeit zu G"""
        self.assertTrue(membership_G(self.profile, (1, 0)))
        toy = import_profile({
            "p": 2, "e": 1, "exps": [1, 1],
            "classes": [{"kind": "frob", "value": 1, "exponents": [1, 1], "pivot_exp": 1}],
        })
        self.assertFalse(membership_G(toy, (1, 0)))
        self.assertTrue(membership_G(toy, (1, 1)))
        self.assertEqual(enumerate_G(toy), [(0, 0), (1, 1)])
        self.assertTrue(compute_sha_prime_power(toy).is_trivial)
        sha = compute_sha_prime_power(toy)
        with self.assertRaises(WrongShape):
            sha.quotient_coordinates((1, 0))

    def test_to_dict_schema(self):
        """Test JSON-Form gegen das Schema"""
        data = compute_sha([quadratic_field(13), quadratic_field(17), quadratic_field(221)], 0).to_dict()
        ok, message = validate_json_schema(data, str(SHA_GROUP_SCHEMA))
        self.assertTrue(ok, message)
        self.assertEqual(data["invariant_factors"], [2])
        self.assertEqual(data["components"]["2"]["ambient_exponents"], [1, 1])

    def test_ambient_limit(self):
        """Test Grenze für ⊕ Z/p^{e_i}"""
        with self.assertRaises(AmbientTooLarge):
            compute_sha_prime_power(self.profile, ComputationLimits(ambient=2))

    def test_parallel_enumeration(self):
        """Test parallele Aufzählung"""
        members = enumerate_G(self.profile, ComputationLimits(max_workers=2))
        self.assertEqual(members, enumerate_G(self.profile))

    def test_trivial_group(self):
        """Test triviale Gruppe"""
        group = ShaGroup.trivial(2, (1, 1), (0, 1))
        self.assertTrue(group.is_trivial)
        self.assertEqual(group.order, 1)
        self.assertEqual(group.members, frozenset({(0, 0), (1, 1)}))


class TestComputeSha(unittest.TestCase):
    """Tests für Ш(L) über alle Primteiler"""

    def test_two_quadratic_fields(self):
        """Test Q(√13) × Q(√17): zwei Faktoren, Ш trivial"""
        print("🔧 Teste Ш für zwei Faktoren...")
        sha = compute_sha([quadratic_field(13), quadratic_field(17)], 0)
        self.assertTrue(sha.is_trivial)
        print("✅ Ш trivial")

    def test_pivot_independence(self):
        """Test gleiche Invarianten für jeden Pivot"""
        L = [quadratic_field(13), quadratic_field(17), quadratic_field(221)]
        for pivot in range(3):
            self.assertEqual(compute_sha(L, pivot).invariant_factors, (2,))

    def test_cyclotomic_example(self):
        """Test Q(ζ_25) × Q(ζ_15) × Q(ζ_9) mit zwei Pivots"""
        print("🔧 Teste Kreisteilungs-Beispiel...")
        L = [cyclotomic_field(25), cyclotomic_field(15), cyclotomic_field(9)]
        first = compute_sha(L, 0)
        second = compute_sha(L, 2)
        self.assertEqual(sorted(first.components), [2, 5])
        self.assertEqual(sorted(second.components), [2, 3])
        self.assertEqual(first.invariant_factors, second.invariant_factors)
        self.assertTrue(first.is_trivial)
        self.assertTrue(second.is_trivial)
        with self.assertRaises(NoCyclicFactor):
            compute_sha(L, 1)
        print("✅ Pivot-unabhängig")

    def test_certificate(self):
        """Test Nachweis: |G|, Smith-Invarianten und Überdeckung je Klassentyp"""
        print("🔧 Teste Nachweis für Ш = Z/2...")
        L = [quadratic_field(13), quadratic_field(17), quadratic_field(221)]
        sha = compute_sha(L, 0)
        certificate = sha_certificate(sha)
        self.assertEqual(certificate["pivot"], 0)
        component = certificate["components"]["2"]
        self.assertEqual(component["group_order"], 4)
        self.assertEqual(component["invariant_factors"], [2])
        profile = sha.profiles[2]
        self.assertEqual(component["class_types"], len(profile.class_types))
        witness, = component["witnesses"]
        self.assertEqual(witness["order"], 2)
        group = sha.components[2]
        generator = group.from_original(witness["generator"])
        self.assertTrue(membership_G(profile, generator))
        for cover, exponents in zip(witness["covering"], profile.class_types):
            self.assertIn(cover["n"], covering_values(2, profile.exps, generator, exponents))
        print("✅ Nachweis vollständig")

    def test_certificate_trivial_component(self):
        """Test Nachweis einer trivialen Komponente ohne Profil"""
        certificate = sha_certificate(compute_sha([quadratic_field(13), cyclotomic_subfield(7, 3)], 0))
        component = certificate["components"]["2"]
        self.assertEqual(component["witnesses"], [])
        self.assertEqual(component["invariant_factors"], [])

    def test_pivot_errors(self):
        """Test ungültiger Pivot-Index"""
        with self.assertRaises(WrongShape):
            compute_sha([quadratic_field(13)], 3)

    def test_single_factor(self):
        """Test L = K: Ш trivial"""
        self.assertTrue(compute_sha([quadratic_field(-1)], 0).is_trivial)


class TestAcceptanceFamilies(unittest.TestCase):
    """Zufällige Familien mit bekanntem Ш = 0"""

    def test_four_to_six_quadratic_fields(self):
        """Test 25 Mengen aus 4 bis 6 verschiedenen quadratischen Körpern, |D| ≤ 100"""
        print("🔧 Teste 25 Mengen quadratischer Körper...")
        radicands = [
            D for D in range(-100, 101)
            if D not in (0, 1) and all(k == 1 for k in factorint(abs(D)).values())
        ]
        rng = random.Random(8143)
        for _ in range(25):
            chosen = rng.sample(radicands, rng.choice([4, 5, 6]))
            sha = compute_sha([quadratic_field(D) for D in chosen], 0)
            self.assertTrue(sha.is_trivial, f"D = {chosen}: {sha.invariant_factors}")
        print("✅ Ш = 0 für n ≥ 4")

    def test_two_factor_algebras(self):
        """Test 25 Algebren K × K' mit zyklischem K, Grade ≤ 9, Führer ≤ 200"""
        print("🔧 Teste 25 Algebren mit zwei Faktoren...")
        rng = random.Random(2718)

        def random_field():
            while True:
                N = rng.randint(3, 200)
                degrees = [d for d in range(2, 10) if int(totient(N)) % d == 0]
                if not degrees:
                    continue
                try:
                    return cyclotomic_subfield(N, rng.choice(degrees))
                except (BadDegree, FieldSpecError):
                    continue

        count = 0
        while count < 25:
            K = random_field()
            if not K.is_cyclic():
                continue
            other = random_field()
            self.assertLessEqual(max(K.modulus, other.modulus), 200)
            sha = compute_sha([K, other], 0)
            self.assertTrue(sha.is_trivial, f"{K} × {other}: {sha.invariant_factors}")
            count += 1
        print("✅ Ш = 0 für zwei Faktoren")


class TestExactSequence(unittest.TestCase):
    """Tests für 0 -> Ш(K_0, K') -> Ш(K, K') -> Ш(K/K_0, K') -> 0"""

    def test_e_equals_one(self):
        """Test e = 1 mit K_0 = Q"""
        report = verify_exact_sequence(example_profile(), None)
        self.assertTrue(report.holds)
        self.assertEqual(report.order, 2)

    def test_quartic_pivots(self):
        """Test e = 2 für zyklische Körper vom Grad 4"""
        print("🔧 Teste exakte Sequenz für e = 2...")
        families = [
            [quadratic_field(17), quadratic_field(221)],
            [quadratic_field(17), cyclotomic_subfield(17, 4)],
            [cyclotomic_subfield(5, 4), quadratic_field(65)],
        ]
        for factors in families:
            ctx = make_context(cyclotomic_subfield(13, 4), factors)
            profile = build_profile(ctx, Granularity.AUTO)
            profile0 = build_profile(kzero_context(ctx), Granularity.AUTO)
            report = verify_exact_sequence(profile, profile0)
            self.assertTrue(report.holds, f"{factors}: {report}")
            self.assertTrue(report.cardinality_identity)
        print("✅ Exakte Sequenz gilt")

    def test_relative_embeds_into_prim(self):
        """Test Ш(K/K_0, K') -> Ш(K_prim, K') ohne gemischte Exponenten"""
        print("🔧 Teste Einbettung in den K_prim-Kontext...")
        ctx = make_context(cyclotomic_subfield(13, 4), [quadratic_field(17), quadratic_field(221)])
        rel = compute_sha_relative(build_profile(ctx, Granularity.AUTO))
        prim_ctx = kprim_context(ctx)
        self.assertEqual(prim_ctx.original_exps, tuple(min(1, x) for x in ctx.original_exps))
        prim = compute_sha_prime_power(build_profile(prim_ctx, Granularity.AUTO))
        mapping = relative_into_prim(rel, prim)
        self.assertEqual(len(mapping), rel.order)
        self.assertEqual(len(set(mapping.values())), rel.order)
        self.assertTrue(set(mapping.values()) <= set(prim.quotient_elements))
        self.assertEqual(prim.order % rel.order, 0)
        print("✅ Einbettung injektiv")

    def test_relative_embeds_with_mixed_exponents(self):
        """Test Einschränkung auf e_i = e, wenn K_prim in einem Faktor liegt"""
        print("🔧 Teste Einbettung mit gemischten Exponenten...")
        ctx = make_context(
            cyclotomic_subfield(13, 4),
            [quadratic_field(13), quadratic_field(17), quadratic_field(221)],
        )
        self.assertEqual(ctx.original_exps, (1, 2, 2))
        prim_ctx = kprim_context(ctx)
        self.assertEqual(prim_ctx.original_exps, (0, 1, 1))
        rel = compute_sha_relative(build_profile(ctx, Granularity.AUTO))
        prim = compute_sha_prime_power(build_profile(prim_ctx, Granularity.AUTO))
        self.assertEqual(prim.invariant_factors, (2,))
        mapping = relative_into_prim(rel, prim)
        self.assertEqual(len(mapping), rel.order)
        self.assertEqual(len(set(mapping.values())), len(mapping))
        for source, target in mapping.items():
            self.assertEqual(prim.to_original(target)[0], 0)
            self.assertIn(target, prim.quotient_elements)
        self.assertEqual(prim.order % rel.order, 0)
        with self.assertRaises(WrongShape):
            relative_into_prim(rel, ShaGroup.trivial(3, (1, 1, 1), (0, 1, 2)))
        print("✅ Einschränkung injektiv")


class TestRandomizedContexts(unittest.TestCase):
    """Zufällige Primpotenz-Kontexte: exakte Sequenz, K_prim-Kriterium und Einbettung"""

    def setUp(self):
        """Setup mit 20 Kontexten, p ∈ {2, 3}, e ≤ 3, m ≤ 4, Umgebung ≤ 10^5"""
        rng = random.Random(5909)
        self.contexts = []
        while len(self.contexts) < 20:
            ctx = random_prime_power_context(rng)
            if ctx.p ** sum(ctx.exps) <= 10 ** 5:
                self.contexts.append(ctx)

    def test_exact_sequence(self):
        """Test F injektiv, π surjektiv, Bild F = Kern π und |Ш| = |Ш_0|·|Ш_rel|"""
        print("🔧 Teste exakte Sequenz auf 20 Zufallskontexten...")
        for ctx in self.contexts:
            profile = build_profile(ctx, Granularity.AUTO)
            zero_ctx = kzero_context(ctx)
            profile0 = build_profile(zero_ctx, Granularity.AUTO) if zero_ctx is not None else None
            report = verify_exact_sequence(profile, profile0)
            self.assertTrue(report.holds, f"{ctx.pivot}; {[str(K) for K in ctx.factors]}: {report}")
            self.assertEqual(report.order, report.order_zero * report.order_relative)
        print("✅ Exakte Sequenz gilt überall")

    def test_trivial_prim_forces_trivial_sha(self):
        """Test Ш(K_prim, K') = 0 ⟹ Ш(K, K') = 0"""
        print("🔧 Teste K_prim-Kriterium...")
        for ctx in self.contexts:
            prim = compute_sha_prime_power(build_profile(kprim_context(ctx), Granularity.AUTO))
            sha = compute_sha_prime_power(build_profile(ctx, Granularity.AUTO))
            if prim.is_trivial:
                self.assertTrue(sha.is_trivial, f"{ctx.pivot}; {[str(K) for K in ctx.factors]}")
        print("✅ Kriterium bestätigt")

    def test_relative_divides_prim(self):
        """Test |Ш(K/K_0, K')| teilt |Ш(K_prim, K')| mit expliziter Injektion"""
        for ctx in self.contexts:
            prim_ctx = kprim_context(ctx)
            if prim_ctx.original_exps != tuple(min(1, x) for x in ctx.original_exps):
                continue
            rel = compute_sha_relative(build_profile(ctx, Granularity.AUTO))
            prim = compute_sha_prime_power(build_profile(prim_ctx, Granularity.AUTO))
            mapping = relative_into_prim(rel, prim)
            self.assertEqual(len(set(mapping.values())), rel.order)
            self.assertEqual(prim.order % rel.order, 0)


class TestPartitions(unittest.TestCase):
    """Tests für die Partitionsansicht"""

    def test_partition_view(self):
        """Test G als Partitionen von J"""
        print("🔧 Teste Partitionsansicht...")
        profile = example_profile()
        partitions = partition_view(profile)
        self.assertEqual(len(partitions), 4)
        self.assertIn((frozenset({0, 1}), frozenset()), partitions)
        self.assertIn((frozenset({1}), frozenset({0})), partitions)
        for a in enumerate_G(profile):
            self.assertEqual(partition_to_vector(profile, partition_of(profile, a)), a)
        print("✅ Partitionsansicht funktioniert")

    def test_coarsen(self):
        """Test Vergröberung auf zwei Blöcke"""
        partition = (frozenset({0}), frozenset({1}), frozenset({2}))
        self.assertEqual(
            coarsen_partition(partition, 1),
            (frozenset({1}), frozenset({0, 2}), frozenset()),
        )
        with self.assertRaises(WrongShape):
            coarsen_partition(partition, 3)

    def test_relative_partition_view(self):
        """Test relative Partitionen auch für e > 1"""
        self.assertEqual(len(relative_partition_view(example_profile())), 4)
        ctx = make_context(cyclotomic_subfield(13, 4), [quadratic_field(17)])
        partitions = relative_partition_view(build_profile(ctx, Granularity.AUTO))
        self.assertIn((frozenset({0}), frozenset()), partitions)

    def test_wrong_exponent(self):
        """Test Partitionen nur für e = 1"""
        ctx = make_context(cyclotomic_subfield(13, 4), [quadratic_field(17)])
        with self.assertRaises(WrongExponent):
            partition_view(build_profile(ctx, Granularity.AUTO))


if __name__ == '__main__':
    unittest.main()
