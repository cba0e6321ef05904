from fractions import Fraction

import pytest

from tensorgap.errors import FieldMismatchError
from tensorgap.fields import GF, QQ, FieldSpec, Scalar, is_prime


def test_rational_scalars_are_normalized():
    x = QQ.from_fraction(Fraction(2, 4))
    assert x.value == Fraction(1, 2)
    y = QQ.from_fraction(Fraction(3, -6))
    assert y.value.denominator == 2 and y.value.numerator == -1


def test_prime_field_residues_reduced():
    f5 = GF(5)
    assert f5.from_int(7).value == 2
    assert f5.from_int(-1).value == 4
    assert f5.from_fraction(Fraction(1, 2)).value == 3  # 2 * 3 = 6 = 1 mod 5


def test_nonprime_modulus_rejected():
    with pytest.raises(ValueError, match="must be prime"):
        GF(4)
    with pytest.raises(ValueError):
        GF(1)
    with pytest.raises(ValueError):
        FieldSpec(2**63 + 9)


def test_is_prime_spot_checks():
    assert is_prime(2) and is_prime(3) and is_prime(65537)
    assert not is_prime(1) and not is_prime(91) and not is_prime(2**32)


def test_arithmetic_over_q():
    a = QQ.from_fraction(Fraction(1, 3))
    b = QQ.from_int(2)
    assert (a + b).value == Fraction(7, 3)
    assert (a * b).value == Fraction(2, 3)
    assert (a - b).value == Fraction(-5, 3)
    assert (b / a).value == 6
    assert (-a).value == Fraction(-1, 3)
    assert (a**3).value == Fraction(1, 27)
    assert a.inverse().value == 3


def test_arithmetic_over_fp():
    f7 = GF(7)
    a, b = f7.from_int(3), f7.from_int(5)
    assert (a + b).value == 1
    assert (a * b).value == 1
    assert (a - b).value == 5
    assert a.inverse().value == 5
    assert (a**6).value == 1


def test_int_coercion_in_operators():
    a = QQ.from_int(3)
    assert (a + 1).value == 4
    assert (1 + a).value == 4
    assert (2 * a).value == 6
    assert (a / 2).value == Fraction(3, 2)
    assert a == 3


def test_cross_field_operations_rejected():
    with pytest.raises(FieldMismatchError):
        QQ.from_int(1) + GF(3).from_int(1)
    with pytest.raises(FieldMismatchError):
        GF(3).from_int(1) == GF(5).from_int(1)


def test_zero_division():
    with pytest.raises(ZeroDivisionError):
        QQ.one() / QQ.zero()
    with pytest.raises(ZeroDivisionError):
        GF(3).zero().inverse()


def test_text_round_trip():
    for text in ["3/4", "-2", "5", "-7/3", "0"]:
        s = QQ.parse(text)
        assert QQ.parse(s.text()) == s
    f7 = GF(7)
    assert f7.parse("10").value == 3
    assert f7.parse("1/2").value == 4
    with pytest.raises(ValueError):
        QQ.parse("abc")
    with pytest.raises(ValueError):
        QQ.parse("1/0")


def test_scalar_truthiness_and_hash():
    assert not QQ.zero()
    assert QQ.one()
    assert hash(QQ.from_int(2)) == hash(QQ.from_int(2))
    assert Scalar(QQ, Fraction(2)) == QQ.from_int(2)
