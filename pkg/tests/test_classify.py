import random

import pytest

from tensorgap.classify import (
    AsymptoticClass,
    Orbit222,
    TrichotomyClass,
    cayley_hyperdet,
    classify_222,
    gap_class,
    gap_constant,
    multilinear_rank_le_2,
    trichotomy,
    unit_restriction_witness,
)
from tensorgap.errors import DimensionMismatchError, ZeroTensorError
from tensorgap.fields import GF, QQ
from tensorgap.linalg import Matrix, mat_det, mat_rank
from tensorgap.tensors import Tensor, pad, restrict, unit_tensor, w_tensor
from conftest import all_fp_tensors, random_rational_tensor

F2 = GF(2)


def _random_invertible(field, n, rng, bound=4):
    while True:
        if field.p is None:
            m = Matrix(field, n, n, [field.from_int(rng.randint(-bound, bound)) for _ in range(n * n)])
        else:
            m = Matrix(field, n, n, [field.from_int(rng.randrange(field.p)) for _ in range(n * n)])
        if mat_det(m):
            return m


def test_cayley_values():
    assert cayley_hyperdet(unit_tensor(3, 2, QQ)).value == 1
    assert not cayley_hyperdet(w_tensor(3, (2, 2, 2), QQ))
    assert not cayley_hyperdet(Tensor.zeros(QQ, (2, 2, 2)))
    with pytest.raises(DimensionMismatchError):
        cayley_hyperdet(Tensor.zeros(QQ, (2, 2, 3)))


def test_cayley_equals_pencil_discriminant():
    # Independent oracle: Cay(T) equals the discriminant of the binary
    # quadratic det(l*X0 + m*X1) built from the first-factor slices.
    rng = random.Random(4242)
    for _ in range(200):
        t = random_rational_tensor((2, 2, 2), rng, bound=7)
        x0 = Matrix(QQ, 2, 2, t.slice_along(0, 0).entries)
        x1 = Matrix(QQ, 2, 2, t.slice_along(0, 1).entries)
        d0, d1 = mat_det(x0), mat_det(x1)
        ds = mat_det(Matrix(QQ, 2, 2, [a + b for a, b in zip(x0.entries, x1.entries)]))
        mixed = ds - d0 - d1
        assert cayley_hyperdet(t) == mixed * mixed - QQ.from_int(4) * d0 * d1


def test_classify_222_representatives():
    assert classify_222(Tensor.zeros(QQ, (2, 2, 2))) is Orbit222.ZERO
    e = Tensor.from_dict(QQ, (2, 2, 2), {(0, 0, 0): 1})
    assert classify_222(e) is Orbit222.RANK_ONE
    c = Tensor.from_dict(QQ, (2, 2, 2), {(0, 0, 0): 1, (0, 1, 1): 1})
    assert classify_222(c) is Orbit222.PENCIL_1X2
    d = Tensor.from_dict(QQ, (2, 2, 2), {(0, 0, 0): 1, (1, 0, 1): 1})
    assert classify_222(d) is Orbit222.PENCIL_2X1
    e2 = Tensor.from_dict(QQ, (2, 2, 2), {(0, 0, 0): 1, (1, 1, 0): 1})
    assert classify_222(e2) is Orbit222.PENCIL_2X2_SPLIT
    assert classify_222(w_tensor(3, (2, 2, 2), QQ)) is Orbit222.W_CLASS
    assert classify_222(unit_tensor(3, 2, QQ)) is Orbit222.UNIT_CLASS


def test_classify_222_invariant_under_invertible_restrictions():
    rng = random.Random(11)
    for t in (w_tensor(3, (2, 2, 2), QQ), unit_tensor(3, 2, QQ)):
        label = classify_222(t)
        for _ in range(25):
            g = tuple(_random_invertible(QQ, 2, rng) for _ in range(3))
            assert classify_222(restrict(t, g)) is label
    # also over F_5 for a pencil representative
    f5 = GF(5)
    t = Tensor.from_dict(f5, (2, 2, 2), {(0, 0, 0): 1, (0, 1, 1): 1})
    for _ in range(25):
        g = tuple(_random_invertible(f5, 2, rng) for _ in range(3))
        assert classify_222(restrict(t, g)) is Orbit222.PENCIL_1X2


def test_f2_census_partition_counts():
    counts = {}
    for _, t in all_fp_tensors((2, 2, 2), 2):
        label = classify_222(t)
        counts[label] = counts.get(label, 0) + 1
    assert counts[Orbit222.ZERO] == 1
    assert counts[Orbit222.RANK_ONE] == 27
    assert counts[Orbit222.PENCIL_1X2] == 18
    assert counts[Orbit222.PENCIL_2X1] == 18
    assert counts[Orbit222.PENCIL_2X2_SPLIT] == 18
    assert counts[Orbit222.W_CLASS] == 54
    assert counts[Orbit222.UNIT_CLASS] == 120
    assert sum(counts.values()) == 256


def test_w_class_members_have_full_signature_and_zero_cayley():
    from tensorgap.tensors import flatten

    for _, t in all_fp_tensors((2, 2, 2), 2):
        if classify_222(t) is Orbit222.W_CLASS:
            assert not cayley_hyperdet(t)
            assert all(mat_rank(flatten(t, [a])) == 2 for a in range(3))


def test_multilinear_rank_gate():
    w3p = pad(w_tensor(3, (2, 2, 2), QQ), (3, 3, 3))
    assert multilinear_rank_le_2(w3p)
    assert not multilinear_rank_le_2(unit_tensor(3, 3, QQ))
    assert multilinear_rank_le_2(unit_tensor(3, 2, QQ))


def test_unit_restriction_witness_on_transformed_units():
    rng = random.Random(77)
    for _ in range(20):
        g = tuple(_random_invertible(QQ, 2, rng) for _ in range(3))
        t = restrict(unit_tensor(3, 2, QQ), g)
        maps = unit_restriction_witness(t)
        assert maps is not None
        assert restrict(t, maps) == unit_tensor(3, 2, QQ)


def test_unit_restriction_witness_with_singular_first_slice():
    # pencil root at (1 : 0): det of the first slice vanishes
    g = Matrix.from_rows(QQ, [[0, 1], [1, 1]])
    ident = Matrix.identity(QQ, 2)
    t = restrict(unit_tensor(3, 2, QQ), (g, ident, ident))
    assert not mat_det(Matrix(QQ, 2, 2, t.slice_along(0, 0).entries))
    maps = unit_restriction_witness(t)
    assert maps is not None
    assert restrict(t, maps) == unit_tensor(3, 2, QQ)


def test_unit_restriction_witness_over_f3():
    f3 = GF(3)
    rng = random.Random(13)
    found = 0
    while found < 5:
        g = tuple(_random_invertible(f3, 2, rng) for _ in range(3))
        t = restrict(unit_tensor(3, 2, f3), g)
        maps = unit_restriction_witness(t)
        assert maps is not None
        assert restrict(t, maps) == unit_tensor(3, 2, f3)
        found += 1


def test_trichotomy_flags_twisted_form_over_f2():
    t = Tensor.from_dict(
        F2, (2, 2, 2), {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (1, 1, 0): 1, (1, 1, 1): 1}
    )
    report = trichotomy(t, seed=3)
    assert report.trichotomy is TrichotomyClass.RESTRICTS_TO_UNIT2
    assert report.unit_witness is None
    assert "closure" in report.unit_witness_note


def test_unit_restriction_witness_twisted_form_over_f2():
    # slices I and [[0,1],[1,1]]: the determinant pencil is irreducible over
    # F_2, so the tensor is a twisted unit form without a rational witness.
    t = Tensor.from_dict(
        F2, (2, 2, 2), {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (1, 1, 0): 1, (1, 1, 1): 1}
    )
    assert classify_222(t) is Orbit222.UNIT_CLASS
    assert unit_restriction_witness(t) is None


def test_trichotomy_examples():
    w3p = pad(w_tensor(3, (2, 2, 2), QQ), (5, 4, 3))
    report = trichotomy(w3p, seed=3, trials=8)
    assert report.trichotomy is TrichotomyClass.W_ISOMORPHIC
    assert report.asymptotic_class is AsymptoticClass.C3
    assert abs(report.constant.decimal - 1.88988) < 1e-5
    assert report.confidence.kind == "randomized" and report.confidence.trials == 8
    assert len(report.cayley_samples) == 8
    assert all(not v for _, v in report.cayley_samples)

    i32p = pad(unit_tensor(3, 2, QQ), (5, 4, 3))
    report = trichotomy(i32p, seed=5, trials=8)
    assert report.trichotomy is TrichotomyClass.RESTRICTS_TO_UNIT2
    assert report.unit_witness is not None
    assert restrict(i32p, report.unit_witness) == unit_tensor(3, 2, QQ)
    assert report.confidence.kind == "deterministic"

    rank_one = Tensor.from_dict(QQ, (3, 3, 3), {(0, 0, 0): 1, (0, 1, 1): 1, (0, 2, 2): 1})
    report = trichotomy(rank_one, seed=7)
    assert report.trichotomy is TrichotomyClass.FLATTENING_RANK_ONE
    assert report.rank_one_witness == frozenset([0])


def test_trichotomy_rejects_zero():
    with pytest.raises(ZeroTensorError):
        trichotomy(Tensor.zeros(QQ, (2, 2, 2)), seed=1)


def test_gap_class_mapping():
    w3 = w_tensor(3, (2, 2, 2), QQ)
    cls, value = gap_class(trichotomy(w3, seed=1))
    assert cls is AsymptoticClass.C3 and abs(value.decimal - 1.8898815748) < 1e-9
    cls, value = gap_class(trichotomy(unit_tensor(3, 2, QQ), seed=1))
    assert cls is AsymptoticClass.AT_LEAST_TWO and value.lower_bound_only
    rank_one = Tensor.from_dict(QQ, (2, 2, 2), {(0, 0, 0): 1})
    cls, value = gap_class(trichotomy(rank_one, seed=1))
    assert cls is AsymptoticClass.ONE and value.decimal == 1.0


def test_gap_constant_values():
    assert gap_constant(2)[1] == 2.0
    assert abs(gap_constant(3)[1] - 1.88988) < 1e-5
    assert abs(gap_constant(4)[1] - 1.75477) < 1e-5
    assert abs(gap_constant(5)[1] - 1.64938) < 1e-5
    with pytest.raises(ValueError):
        gap_constant(1)


def test_gap_constant_monotone_decreasing():
    values = [gap_constant(k)[1] for k in range(2, 65)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(v > 1 for v in values)
    assert values[1] < 2  # c_3 sits strictly inside the (1, 2) gap
