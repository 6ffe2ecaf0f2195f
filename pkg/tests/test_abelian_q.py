#!/usr/bin/env python3
"""
Tests für Abelian Q Module
"""

import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import totient

from core.abelian_q import (
    INFINITY,
    AbelianFieldQ,
    Place,
    compositum,
    cyclotomic_field,
    cyclotomic_subfield,
    decomposition_group,
    explicit_field,
    field_from_dict,
    field_to_dict,
    frobenius_classes,
    inertia_group,
    intersection,
    is_subfield,
    local_artin_symbol,
    local_degree,
    prime_power_part,
    quadratic_field,
    quadratic_radicand,
    quadratic_subfields,
    ramified_primes,
    rational_field,
    residue_degree,
    subfield_of_degree,
    subfields_of_degree,
    symbol_support,
    units,
)
from core.errors import BadDegree, FieldSpecError, NonCyclic, ZeroInput
from core.validation import parse_field_spec

SQUAREFREE = [-15, -11, -7, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10, 13, 17, 21, 221]


class TestFieldConstruction(unittest.TestCase):
    """Tests für Konstruktion und Normalisierung abelscher Körper"""

    def test_quadratic_conductors(self):
        """Test Führer quadratischer Körper"""
        print("✅ Teste Führer quadratischer Körper...")
        self.assertEqual(quadratic_field(13).modulus, 13)
        self.assertEqual(quadratic_field(-1).modulus, 4)
        self.assertEqual(quadratic_field(2).modulus, 8)
        self.assertEqual(quadratic_field(-3).modulus, 3)
        self.assertEqual(quadratic_field(3).modulus, 12)
        for D in SQUAREFREE:
            self.assertEqual(quadratic_field(D).degree, 2)
            self.assertEqual(quadratic_radicand(quadratic_field(D)), D)

    def test_quadratic_rejects_non_squarefree(self):
        """Test ungültige Radikanden"""
        print("✅ Teste ungültige Radikanden...")
        with self.assertRaises(FieldSpecError):
            quadratic_field(12)
        with self.assertRaises(FieldSpecError):
            quadratic_field(0)
        self.assertEqual(quadratic_field(1), rational_field())

    def test_cyclotomic_fields(self):
        """Test Kreisteilungskörper"""
        print("✅ Teste Kreisteilungskörper...")
        self.assertEqual(cyclotomic_field(25).degree, 20)
        self.assertTrue(cyclotomic_field(25).is_cyclic())
        self.assertFalse(cyclotomic_field(15).is_cyclic())
        self.assertEqual(explicit_field(26, []).modulus, 13)

    def test_cyclotomic_subfield(self):
        """Test eindeutige Teilkörper"""
        print("✅ Teste eindeutige Teilkörper...")
        self.assertEqual(cyclotomic_subfield(13, 2), quadratic_field(13))
        self.assertEqual(cyclotomic_subfield(7, 3).degree, 3)
        with self.assertRaises(FieldSpecError):
            cyclotomic_subfield(15, 2)
        with self.assertRaises(BadDegree):
            cyclotomic_subfield(7, 4)

    def test_serialization(self):
        """Test JSON-Darstellung"""
        print("✅ Teste JSON-Darstellung...")
        for K in [quadratic_field(-7), cyclotomic_subfield(19, 9), rational_field()]:
            self.assertEqual(field_from_dict(field_to_dict(K)), K)

    def test_rejects_non_units(self):
        """Test Erzeuger ohne Einheitseigenschaft"""
        print("✅ Teste Erzeuger ohne Einheitseigenschaft...")
        with self.assertRaises(FieldSpecError):
            AbelianFieldQ.from_generators(15, [3])


class TestFieldOperations(unittest.TestCase):
    """Tests für Kompositum, Schnitt und Teilkörper"""

    def setUp(self):
        """Setup für Körperoperationen"""
        self.k13 = quadratic_field(13)
        self.k17 = quadratic_field(17)
        self.k221 = quadratic_field(221)
        self.F = compositum(self.k13, self.k17)

    def test_biquadratic_compositum(self):
        """Test Kompositum Q(√13, √17)"""
        print("✅ Teste Kompositum Q(√13, √17)...")
        self.assertEqual(self.F.degree, 4)
        self.assertFalse(self.F.is_cyclic())
        for K in (self.k13, self.k17, self.k221):
            self.assertTrue(is_subfield(K, self.F))
        self.assertFalse(is_subfield(quadratic_field(5), self.F))
        self.assertEqual(intersection(self.k13, self.k17), rational_field())

    def test_subfield_of_degree(self):
        """Test Teilkörper vorgegebenen Grades"""
        print("✅ Teste Teilkörper vorgegebenen Grades...")
        K = cyclotomic_field(25)
        self.assertEqual(subfield_of_degree(K, 5).degree, 5)
        self.assertEqual(subfield_of_degree(K, 2), quadratic_field(5))
        with self.assertRaises(BadDegree):
            subfield_of_degree(K, 3)
        with self.assertRaises(NonCyclic):
            subfield_of_degree(cyclotomic_field(15), 2)

    def test_subfields_of_degree(self):
        """Test alle Teilkörper vom Grad p eines Körpers vom Typ C_p × C_p"""
        self.assertEqual(set(subfields_of_degree(self.F, 2)), {self.k13, self.k17, self.k221})
        self.assertEqual(quadratic_subfields(self.F), [self.k13, self.k17, self.k221])
        self.assertEqual(quadratic_subfields(cyclotomic_subfield(7, 3)), [])
        cubics = subfields_of_degree(compositum(cyclotomic_subfield(7, 3), cyclotomic_subfield(9, 3)), 3)
        self.assertEqual(len(cubics), 4)
        self.assertIn(cyclotomic_subfield(7, 3), cubics)
        self.assertIn(cyclotomic_subfield(9, 3), cubics)
        self.assertTrue(all(K.is_cyclic() and K.degree == 3 for K in cubics))
        with self.assertRaises(BadDegree):
            subfields_of_degree(self.F, 3)

    def test_prime_power_part(self):
        """Test K(p)"""
        print("✅ Teste K(p)...")
        K = cyclotomic_field(9)
        self.assertEqual(prime_power_part(K, 3).degree, 3)
        self.assertEqual(prime_power_part(K, 2).degree, 2)
        self.assertEqual(prime_power_part(K, 5), rational_field())

    def test_galois_log(self):
        """Test diskreter Logarithmus im zyklischen Quotienten"""
        print("✅ Teste diskreten Logarithmus...")
        K = cyclotomic_subfield(13, 4)
        g = K.quotient_generator()
        self.assertEqual(K.galois_log(g), 1)
        self.assertEqual(K.galois_log(1), 0)
        self.assertEqual(K.galois_log(g * g % 13), 2)
        with self.assertRaises(NonCyclic):
            cyclotomic_field(15).quotient_generator()


class TestLocalData(unittest.TestCase):
    """Tests für Zerlegungsgruppen, lokale Grade und Artin-Symbole"""

    def test_local_degrees(self):
        """Test lokale Grade"""
        print("✅ Teste lokale Grade...")
        k13 = quadratic_field(13)
        self.assertEqual(local_degree(k13, Place(17)), 1)
        self.assertEqual(local_degree(k13, Place(2)), 2)
        self.assertEqual(local_degree(k13, Place(13)), 2)
        self.assertEqual(local_degree(k13, INFINITY), 1)
        self.assertEqual(local_degree(quadratic_field(-1), INFINITY), 2)

    def test_biquadratic_local_degrees(self):
        """Test alle lokalen Grade von Q(√13, √17) sind ≤ 2"""
        print("✅ Teste lokale Grade von Q(√13, √17)...")
        F = compositum(quadratic_field(13), quadratic_field(17))
        for q in ramified_primes(F) + [2, 3, 5, 7]:
            self.assertLessEqual(local_degree(F, Place(q)), 2)

    def test_residue_and_inertia(self):
        """Test Restklassengrad und Trägheitsgruppe"""
        print("✅ Teste Restklassengrad und Trägheit...")
        k13 = quadratic_field(13)
        self.assertEqual(residue_degree(k13, 2), 2)
        self.assertEqual(residue_degree(k13, 3), 1)
        with self.assertRaises(BadDegree):
            residue_degree(k13, 13)
        self.assertEqual(inertia_group(cyclotomic_field(25), 5).order, 20)
        self.assertEqual(decomposition_group(cyclotomic_field(7), Place(2)).order, 3)

    def test_artin_symbol_conventions(self):
        """Test Vorzeichenkonvention des Artin-Symbols"""
        print("✅ Teste Artin-Symbol...")
        self.assertEqual(local_artin_symbol(7, INFINITY, -3), 6)
        self.assertEqual(local_artin_symbol(7, INFINITY, 3), 1)
        self.assertEqual(local_artin_symbol(7, Place(2), 2), 2)
        self.assertEqual(local_artin_symbol(7, Place(7), 3), 5)
        self.assertEqual(local_artin_symbol(1, Place(2), 5), 0)
        with self.assertRaises(ZeroInput):
            local_artin_symbol(7, INFINITY, 0)

    def test_symbol_support(self):
        """Test Träger des Artin-Symbols"""
        print("✅ Teste Träger...")
        support = symbol_support(15, Fraction(14, 9))
        self.assertEqual(support, [Place(2), Place(3), Place(5), Place(7), INFINITY])

    def test_place_validation(self):
        """Test Stellen"""
        print("✅ Teste Stellen...")
        self.assertEqual(str(INFINITY), "∞")
        self.assertEqual(Place.finite(5).to_json(), 5)
        with self.assertRaises(FieldSpecError):
            Place.finite(4)

    @settings(max_examples=60, deadline=None)
    @given(
        st.sampled_from([5, 7, 8, 9, 12, 13, 15, 16, 20, 21, 25, 28]),
        st.integers(min_value=-200, max_value=200).filter(lambda x: x != 0),
        st.integers(min_value=1, max_value=60),
    )
    def test_product_formula(self, modulus, num, den):
        """Test Produktformel: Π_v Artin-Symbol = 1 in (Z/NZ)^×"""
        c = Fraction(num, den)
        product = 1
        for v in symbol_support(modulus, c):
            product = product * local_artin_symbol(modulus, v, c) % modulus
        self.assertEqual(product, 1)

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from(SQUAREFREE), st.sampled_from(SQUAREFREE))
    def test_compositum_degree(self, a, b):
        """Test [Q(√a, √b) : Q] ∈ {2, 4}"""
        F = compositum(quadratic_field(a), quadratic_field(b))
        self.assertEqual(F.degree, 2 if a == b else 4)


class TestFieldSpecParsing(unittest.TestCase):
    """Tests für die Körperbeschreibungen"""

    def test_parse_forms(self):
        """Test alle Formen"""
        print("✅ Teste Körperbeschreibungen...")
        self.assertEqual(parse_field_spec("quad:13"), quadratic_field(13))
        self.assertEqual(parse_field_spec("quad:-1"), quadratic_field(-1))
        self.assertEqual(parse_field_spec("cyclo:25"), cyclotomic_field(25))
        self.assertEqual(parse_field_spec("cyclosub:7:3"), cyclotomic_subfield(7, 3))
        self.assertEqual(parse_field_spec("explicit:13:3"), cyclotomic_subfield(13, 4))
        self.assertEqual(parse_field_spec("explicit:13:").degree, 12)

    def test_parse_errors(self):
        """Test ungültige Beschreibungen"""
        print("✅ Teste ungültige Beschreibungen...")
        for text in ["quad:0", "quad:12", "quad", "cubic:7", "cyclosub:7", "explicit:15:3", "cyclo:0"]:
            with self.assertRaises(FieldSpecError):
                parse_field_spec(text)

    def test_units(self):
        """Test Einheiten"""
        print("🔧 Teste Einheiten...")
        self.assertEqual(units(1), [0])
        self.assertEqual(len(units(221)), int(totient(221)))
        self.assertEqual(frobenius_classes(1), [1])
        self.assertEqual(frobenius_classes(8), [1, 3, 5, 7])
        self.assertEqual(len(frobenius_classes(13)), 12)


if __name__ == '__main__':
    unittest.main()
