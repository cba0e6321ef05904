"""Symbolic regression for the coordinate-restriction eliminations.

A 3x3x3 tensor that agrees with the order-3 W-tensor on the 2x2x2 corner and
whose hyperdeterminant vanishes on every coordinate restriction has all its
remaining coefficients forced, step by step, down to a six-parameter family
whose flattenings have all 3x3 minors identically zero.  This test replays
the elimination chain symbolically (sympy is a test-only dependency) and
cross-checks the package's exact hyperdeterminant against the symbolic one on
random rational points.
"""

import itertools
import random
from fractions import Fraction

import sympy

from tensorgap.classify import cayley_hyperdet, multilinear_rank_le_2
from tensorgap.fields import QQ
from tensorgap.tensors import Tensor

T_IDX = list(itertools.product(range(2), repeat=3))


def sym_cayley(u):
    """The degree-4 hyperdeterminant of a 2x2x2 array of sympy expressions."""
    t = {(i, j, k): u[i][j][k] for i, j, k in T_IDX}
    return sympy.expand(
        t[0, 1, 1] ** 2 * t[1, 0, 0] ** 2
        - 2 * t[0, 1, 0] * t[0, 1, 1] * t[1, 0, 0] * t[1, 0, 1]
        + t[0, 1, 0] ** 2 * t[1, 0, 1] ** 2
        - 2 * t[0, 0, 1] * t[0, 1, 1] * t[1, 0, 0] * t[1, 1, 0]
        - 2 * t[0, 0, 1] * t[0, 1, 0] * t[1, 0, 1] * t[1, 1, 0]
        + 4 * t[0, 0, 0] * t[0, 1, 1] * t[1, 0, 1] * t[1, 1, 0]
        + t[0, 0, 1] ** 2 * t[1, 1, 0] ** 2
        + 4 * t[0, 0, 1] * t[0, 1, 0] * t[1, 0, 0] * t[1, 1, 1]
        - 2 * t[0, 0, 0] * t[0, 1, 1] * t[1, 0, 0] * t[1, 1, 1]
        - 2 * t[0, 0, 0] * t[0, 1, 0] * t[1, 0, 1] * t[1, 1, 1]
        - 2 * t[0, 0, 0] * t[0, 0, 1] * t[1, 1, 0] * t[1, 1, 1]
        + t[0, 0, 0] ** 2 * t[1, 1, 1] ** 2
    )


def coordinate_restrict(entries, kill):
    """Restrict a symbolic 3x3x3 entry dict by dropping one index per factor."""
    keep = [sorted(set(range(3)) - {k}) for k in kill]
    return [
        [[entries[(keep[0][x], keep[1][y], keep[2][z])] for z in range(2)] for y in range(2)]
        for x in range(2)
    ]


def theta_family():
    """The generic corner family: W on the 2x2x2 corner, symbols elsewhere."""
    theta = {}
    entries = {}
    for idx in itertools.product(range(3), repeat=3):
        if max(idx) <= 1:
            entries[idx] = sympy.Integer(idx in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
        else:
            theta[idx] = sympy.Symbol(f"th{idx[0]}{idx[1]}{idx[2]}")
            entries[idx] = theta[idx]
    return entries, theta


def test_elimination_chain():
    entries, th = theta_family()

    def cay_at(kill, subs):
        e = {idx: sympy.expand(val.subs(subs)) for idx, val in entries.items()}
        return sym_cayley(coordinate_restrict(e, kill))

    def check(kill, rhs, subs):
        lhs = cay_at(kill, subs)
        assert sympy.expand(lhs - sympy.expand(rhs.subs(subs) ** 2)) == 0, kill

    subs0 = {}
    check((0, 2, 2), th[2, 1, 1], subs0)
    check((2, 0, 2), th[1, 2, 1], subs0)
    check((2, 2, 0), th[1, 1, 2], subs0)

    subs1 = {th[2, 1, 1]: 0, th[1, 2, 1]: 0, th[1, 1, 2]: 0}
    check((1, 2, 2), th[2, 0, 1] - th[2, 1, 0], subs1)
    check((2, 1, 2), th[0, 2, 1] - th[1, 2, 0], subs1)
    check((2, 2, 1), th[0, 1, 2] - th[1, 0, 2], subs1)

    subs2 = dict(subs1)
    subs2.update({th[2, 1, 0]: th[2, 0, 1], th[1, 2, 0]: th[0, 2, 1], th[1, 0, 2]: th[0, 1, 2]})
    check((2, 1, 0), th[1, 2, 2] - th[1, 0, 2] * th[1, 2, 0], subs2)
    check((0, 2, 1), th[2, 1, 2] - th[0, 1, 2] * th[2, 1, 0], subs2)
    check((1, 0, 2), th[2, 2, 1] - th[2, 1, 0] * th[1, 2, 0], subs2)

    subs3 = dict(subs2)
    subs3.update(
        {
            th[1, 2, 2]: (th[1, 0, 2] * th[1, 2, 0]).subs(subs2),
            th[2, 1, 2]: (th[0, 1, 2] * th[2, 1, 0]).subs(subs2),
            th[2, 2, 1]: (th[2, 1, 0] * th[1, 2, 0]).subs(subs2),
        }
    )
    check((1, 1, 2), th[2, 2, 0] - (th[1, 2, 0] * th[2, 0, 0] + th[0, 2, 0] * th[2, 1, 0]), subs3)
    check((1, 2, 1), th[2, 0, 2] - (th[1, 0, 2] * th[2, 0, 0] + th[0, 0, 2] * th[2, 1, 0]), subs3)
    check((2, 1, 1), th[0, 2, 2] - (th[0, 2, 0] * th[1, 0, 2] + th[0, 0, 2] * th[1, 2, 0]), subs3)

    subs4 = dict(subs3)
    subs4.update(
        {
            th[2, 2, 0]: (th[1, 2, 0] * th[2, 0, 0] + th[0, 2, 0] * th[2, 1, 0]).subs(subs3),
            th[2, 0, 2]: (th[1, 0, 2] * th[2, 0, 0] + th[0, 0, 2] * th[2, 1, 0]).subs(subs3),
            th[0, 2, 2]: (th[0, 2, 0] * th[1, 0, 2] + th[0, 0, 2] * th[1, 2, 0]).subs(subs3),
        }
    )
    check((0, 1, 1), th[2, 2, 2] - (th[1, 0, 2] * th[2, 2, 0] + th[0, 0, 2] * th[2, 2, 1]), subs4)


def final_family_entries(s1, s2, s3, p1, p2, p3):
    """The six-parameter family left after the eliminations."""
    e = {idx: 0 for idx in itertools.product(range(3), repeat=3)}
    e[(0, 0, 1)] = e[(0, 1, 0)] = e[(1, 0, 0)] = 1
    e[(2, 0, 0)] = s1
    e[(0, 2, 0)] = s2
    e[(0, 0, 2)] = s3
    e[(2, 0, 1)] = e[(2, 1, 0)] = p1
    e[(1, 2, 0)] = e[(0, 2, 1)] = p2
    e[(0, 1, 2)] = e[(1, 0, 2)] = p3
    e[(0, 2, 2)] = s2 * p3 + s3 * p2
    e[(2, 0, 2)] = s1 * p3 + s3 * p1
    e[(2, 2, 0)] = s1 * p2 + s2 * p1
    e[(1, 2, 2)] = p2 * p3
    e[(2, 1, 2)] = p1 * p3
    e[(2, 2, 1)] = p1 * p2
    e[(2, 2, 2)] = s1 * p2 * p3 + p1 * s2 * p3 + p1 * p2 * s3
    return e


def test_final_family_has_multilinear_rank_two():
    syms = sympy.symbols("s1 s2 s3 p1 p2 p3")
    e = final_family_entries(*syms)
    # all 3x3 minors of the three single-factor flattenings vanish identically
    for axis in range(3):
        rows = []
        for i in range(3):
            row = []
            for rest in itertools.product(range(3), repeat=2):
                idx = list(rest)
                idx.insert(axis, i)
                row.append(e[tuple(idx)])
            rows.append(row)
        m = sympy.Matrix(rows)
        for cols in itertools.combinations(range(9), 3):
            assert sympy.expand(m[:, list(cols)].det()) == 0


def test_final_family_random_points_stay_in_subspace_variety():
    rng = random.Random(31)
    for _ in range(10):
        vals = [Fraction(rng.randint(-4, 4)) for _ in range(6)]
        e = final_family_entries(*vals)
        t = Tensor.from_dict(QQ, (3, 3, 3), {k: QQ.from_fraction(Fraction(v)) for k, v in e.items() if v})
        if t.is_zero():
            continue
        assert multilinear_rank_le_2(t)


def test_symbolic_cayley_matches_exact_implementation():
    rng = random.Random(8)
    for _ in range(50):
        vals = [rng.randint(-6, 6) for _ in range(8)]
        t = Tensor(QQ, (2, 2, 2), [QQ.from_int(v) for v in vals])
        u = [[[vals[4 * i + 2 * j + k] for k in range(2)] for j in range(2)] for i in range(2)]
        assert cayley_hyperdet(t).value == Fraction(int(sym_cayley(u)))
