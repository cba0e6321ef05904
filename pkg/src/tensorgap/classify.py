"""Order-3 machinery: hyperdeterminant, 2x2x2 orbits, trichotomy, gap constants.

Every 2x2x2 tensor falls into exactly one of seven orbit classes over the
algebraic closure, and the class is decided by the three flattening ranks
together with the degree-4 Cayley hyperdeterminant.  Over a non-closed ground
field the full-rank / nonvanishing-hyperdeterminant class is reported at the
level of the closure; a ground-field witness of a restriction onto the unit
tensor is constructed from the rank-one points of the determinant pencil
whenever those points are rational, and its absence is flagged in the report
rather than handled through field extensions (the asymptotic class is
extension-invariant, so the gap output is unaffected).

The trichotomy classifier for arbitrary order-3 shapes combines one exact
deterministic gate (a rank-one flattening) with repeated random compressions
to 2x2x2; a nonvanishing hyperdeterminant sample is a deterministic
certificate for the unit class, while an all-vanishing outcome is accepted
only together with the multilinear-rank gate.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import (
    ClassificationInconsistencyError,
    DimensionMismatchError,
    ZeroTensorError,
)
from .fields import FieldSpec, Scalar
from .linalg import Matrix, mat_det, mat_inverse, mat_rank
from .ranks import (
    DEFAULT_START_BOUND,
    RankSignature,
    generic_compress,
    has_rank_one_flattening,
    rank_signature,
)
from .tensors import Tensor, compose_maps, flatten, restrict, unit_tensor


class Orbit222(str, Enum):
    """Orbit classes of 2x2x2 tensors (closure-level on the last two)."""

    ZERO = "zero"
    RANK_ONE = "rank-one"
    PENCIL_1X2 = "pencil-1x2"  # first factor pinned: ranks (1, 2, 2)
    PENCIL_2X1 = "pencil-2x1"  # second factor pinned: ranks (2, 1, 2)
    PENCIL_2X2_SPLIT = "pencil-2x2-split"  # third factor pinned: ranks (2, 2, 1)
    W_CLASS = "w-class"
    UNIT_CLASS = "unit-class"


class TrichotomyClass(str, Enum):
    FLATTENING_RANK_ONE = "flattening-rank-one"
    W_ISOMORPHIC = "w-isomorphic"
    RESTRICTS_TO_UNIT2 = "restricts-to-unit2"


class AsymptoticClass(str, Enum):
    ONE = "1"
    C3 = "c3"
    AT_LEAST_TWO = "at-least-2"


@dataclass(frozen=True)
class GapValue:
    """An asymptotic-subrank value: exact description plus decimal."""

    description: str
    decimal: float
    lower_bound_only: bool = False


@dataclass(frozen=True)
class Confidence:
    kind: str  # "deterministic" | "randomized"
    trials: int | None = None

    @staticmethod
    def deterministic() -> "Confidence":
        return Confidence("deterministic")

    @staticmethod
    def randomized(trials: int) -> "Confidence":
        return Confidence("randomized", trials)


@dataclass(frozen=True)
class ClassificationReport:
    """Outcome of the order-3 trichotomy for one tensor."""

    trichotomy: TrichotomyClass
    rank_signature: RankSignature
    cayley_samples: tuple  # ((seed, Scalar), ...) one per compression trial
    asymptotic_class: AsymptoticClass
    constant: GapValue
    confidence: Confidence
    rank_one_witness: frozenset | None = None
    unit_witness: tuple | None = None  # map tuple with restrict(T, maps) = I_{3,2}
    unit_witness_note: str | None = None


# -- Cayley hyperdeterminant ---------------------------------------------------

# Monomials of the degree-4 invariant of 2x2x2 tensors: (coefficient, indices).
_CAYLEY_TERMS = (
    (1, ((0, 1, 1), (0, 1, 1), (1, 0, 0), (1, 0, 0))),
    (-2, ((0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1))),
    (1, ((0, 1, 0), (0, 1, 0), (1, 0, 1), (1, 0, 1))),
    (-2, ((0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 1, 0))),
    (-2, ((0, 0, 1), (0, 1, 0), (1, 0, 1), (1, 1, 0))),
    (4, ((0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0))),
    (1, ((0, 0, 1), (0, 0, 1), (1, 1, 0), (1, 1, 0))),
    (4, ((0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1))),
    (-2, ((0, 0, 0), (0, 1, 1), (1, 0, 0), (1, 1, 1))),
    (-2, ((0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 1))),
    (-2, ((0, 0, 0), (0, 0, 1), (1, 1, 0), (1, 1, 1))),
    (1, ((0, 0, 0), (0, 0, 0), (1, 1, 1), (1, 1, 1))),
)


def cayley_hyperdet(t: Tensor) -> Scalar:
    """Exact value of the degree-4 hyperdeterminant of a 2x2x2 tensor."""
    if t.dims != (2, 2, 2):
        raise DimensionMismatchError(f"hyperdeterminant needs dims (2,2,2), got {t.dims}")
    field = t.ring
    if not isinstance(field, FieldSpec):
        raise DimensionMismatchError("hyperdeterminant is evaluated over Q or F_p")
    total = field.zero()
    for coeff, idxs in _CAYLEY_TERMS:
        prod = field.from_int(coeff)
        for idx in idxs:
            prod = prod * t[idx]
            if not prod:
                break
        if prod:
            total = total + prod
    return total


def classify_222(t: Tensor) -> Orbit222:
    """Orbit class of a 2x2x2 tensor from flattening ranks and the hyperdeterminant."""
    if t.dims != (2, 2, 2):
        raise DimensionMismatchError(f"orbit classification needs dims (2,2,2), got {t.dims}")
    if t.is_zero():
        return Orbit222.ZERO
    r1 = mat_rank(flatten(t, [0]))
    r2 = mat_rank(flatten(t, [1]))
    r3 = mat_rank(flatten(t, [2]))
    pattern = (r1, r2, r3)
    if pattern == (1, 1, 1):
        return Orbit222.RANK_ONE
    if pattern == (1, 2, 2):
        return Orbit222.PENCIL_1X2
    if pattern == (2, 1, 2):
        return Orbit222.PENCIL_2X1
    if pattern == (2, 2, 1):
        return Orbit222.PENCIL_2X2_SPLIT
    if pattern == (2, 2, 2):
        return Orbit222.UNIT_CLASS if cayley_hyperdet(t) else Orbit222.W_CLASS
    raise ClassificationInconsistencyError(f"impossible rank pattern {pattern}")


def multilinear_rank_le_2(t: Tensor) -> bool:
    """Whether all three single-factor flattening ranks are at most 2."""
    if t.order != 3:
        raise DimensionMismatchError("multilinear-rank gate is for order 3")
    return all(mat_rank(flatten(t, [a])) <= 2 for a in range(3))


# -- ground-field witness for the unit class -----------------------------------


def _rational_sqrt(q: Fraction):
    """The exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _pencil_rank_one_points(t: Tensor):
    """Distinct projective zeros (l : m) of det(l*A0 + m*A1) over the ground field.

    A0, A1 are the first-factor slices.  Returns a list of scalar pairs;
    when the hyperdeterminant is nonzero the quadratic is squarefree, so the
    list has length 0 or 2 over the ground field.
    """
    field = t.ring
    a0 = Matrix(field, 2, 2, t.slice_along(0, 0).entries)
    a1 = Matrix(field, 2, 2, t.slice_along(0, 1).entries)
    det0 = mat_det(a0)
    det1 = mat_det(a1)
    det_sum = mat_det(
        Matrix(field, 2, 2, [x + y for x, y in zip(a0.entries, a1.entries)])
    )
    mixed = det_sum - det0 - det1  # the l*m coefficient
    if field.p is not None:
        points = []
        candidates = [(field.one(), field.from_int(u)) for u in range(field.p)]
        candidates.append((field.zero(), field.one()))
        for lam, mu in candidates:
            if det0 * lam * lam + mixed * lam * mu + det1 * mu * mu == field.zero():
                points.append((lam, mu))
        return points
    # Rational case: solve det0*x^2 + mixed*x + det1 = 0 projectively.
    if not det0:
        points = [(field.one(), field.zero())]
        if mixed:
            points.append((field.coerce(-det1.value / mixed.value), field.one()))
        return points
    disc = mixed * mixed - field.from_int(4) * det0 * det1
    root = _rational_sqrt(disc.value)
    if root is None or root == 0:
        return []
    two_a = 2 * det0.value
    x1 = (-mixed.value + root) / two_a
    x2 = (-mixed.value - root) / two_a
    return [(field.coerce(x1), field.one()), (field.coerce(x2), field.one())]


def _rank_one_factors(m: Matrix):
    """Write a rank-one 2x2 matrix as u v^T."""
    field = m.ring
    col = 0 if (m[0, 0] or m[1, 0]) else 1
    u = [m[0, col], m[1, col]]
    pivot_row = 0 if u[0] else 1
    inv = u[pivot_row].inverse()
    v = [m[pivot_row, 0] * inv, m[pivot_row, 1] * inv]
    return u, v


def unit_restriction_witness(t: Tensor):
    """Invertible maps carrying a unit-class 2x2x2 tensor onto I_{3,2}, or None.

    Requires Cay(t) != 0.  The two rank-one points of the determinant pencil
    give the diagonalizing bases; over a non-closed ground field the points
    can be irrational, in which case None is returned and the tensor is a
    twisted form of the unit tensor.
    """
    if t.dims != (2, 2, 2):
        raise DimensionMismatchError("unit witness needs dims (2,2,2)")
    field = t.ring
    if not cayley_hyperdet(t):
        raise ValueError("unit witness requires a nonvanishing hyperdeterminant")
    points = _pencil_rank_one_points(t)
    if len(points) < 2:
        return None
    (l0, m0), (l1, m1) = points[0], points[1]
    a0 = Matrix(field, 2, 2, t.slice_along(0, 0).entries)
    a1 = Matrix(field, 2, 2, t.slice_along(0, 1).entries)
    m_0 = a0.scale(l0)
    m_0 = Matrix(field, 2, 2, [x + y for x, y in zip(m_0.entries, a1.scale(m0).entries)])
    m_1 = a0.scale(l1)
    m_1 = Matrix(field, 2, 2, [x + y for x, y in zip(m_1.entries, a1.scale(m1).entries)])
    u0, v0 = _rank_one_factors(m_0)
    u1, v1 = _rank_one_factors(m_1)
    # First-factor basis: columns of the inverse of the root matrix.
    r = Matrix.from_rows(field, [[l0, m0], [l1, m1]])
    r_inv = mat_inverse(r)
    f0 = r_inv.column(0)
    f1 = r_inv.column(1)
    g1 = mat_inverse(Matrix.from_rows(field, [[f0[0], f1[0]], [f0[1], f1[1]]]))
    g2 = mat_inverse(Matrix.from_rows(field, [[u0[0], u1[0]], [u0[1], u1[1]]]))
    g3 = mat_inverse(Matrix.from_rows(field, [[v0[0], v1[0]], [v0[1], v1[1]]]))
    maps = (g1, g2, g3)
    if restrict(t, maps) != unit_tensor(3, 2, field):
        raise ClassificationInconsistencyError("pencil diagonalization failed to verify")
    return maps


# -- the trichotomy classifier ---------------------------------------------------


DEFAULT_TRIALS = 8


def trichotomy(
    t: Tensor, seed: int = 0, trials: int = DEFAULT_TRIALS, start_bound: int = DEFAULT_START_BOUND
) -> ClassificationReport:
    """Classify a nonzero order-3 tensor into the three-class hierarchy.

    Deterministic gate first: a flattening of rank one settles the first
    class.  Otherwise `trials` independent random compressions to 2x2x2 are
    classified; any unit-class hit is a deterministic certificate (the
    sampled hyperdeterminant value is a polynomial certificate, and a
    ground-field witness map is attached when the pencil splits), while an
    all-W outcome is accepted only together with the deterministic
    multilinear-rank gate and is reported with randomized confidence.
    """
    if t.order != 3:
        raise DimensionMismatchError("trichotomy classifies order-3 tensors")
    if t.is_zero():
        raise ZeroTensorError("trichotomy presupposes a nonzero tensor")
    if not isinstance(t.ring, FieldSpec):
        raise DimensionMismatchError("trichotomy works over Q or F_p")
    signature = rank_signature(t)
    witness_axes = has_rank_one_flattening(t)
    if witness_axes is not None:
        return ClassificationReport(
            trichotomy=TrichotomyClass.FLATTENING_RANK_ONE,
            rank_signature=signature,
            cayley_samples=(),
            asymptotic_class=AsymptoticClass.ONE,
            constant=GapValue("1", 1.0),
            confidence=Confidence.deterministic(),
            rank_one_witness=witness_axes,
        )

    samples = []
    rng = random.Random(seed)
    for trial in range(trials):
        trial_seed = rng.randrange(2**63)
        maps, compressed = generic_compress(t, trial_seed, start_bound=start_bound)
        cay = cayley_hyperdet(compressed)
        samples.append((trial_seed, cay))
        if cay:
            # Unit class: deterministic certificate.  T >= compressed >= I_{3,2}.
            witness = None
            note = None
            cube_maps = unit_restriction_witness(compressed)
            if cube_maps is None:
                note = (
                    "determinant pencil has no rational rank-one points over "
                    "the ground field; unit restriction exists over the "
                    "closure only"
                )
            else:
                witness = compose_maps(cube_maps, maps)
                if restrict(t, witness) != unit_tensor(3, 2, t.ring):
                    raise ClassificationInconsistencyError("composed unit witness failed")
            return ClassificationReport(
                trichotomy=TrichotomyClass.RESTRICTS_TO_UNIT2,
                rank_signature=signature,
                cayley_samples=tuple(samples),
                asymptotic_class=AsymptoticClass.AT_LEAST_TWO,
                constant=GapValue("2", 2.0, lower_bound_only=True),
                confidence=Confidence.deterministic(),
                unit_witness=witness,
                unit_witness_note=note,
            )

    # Every sample was in the W class; require the deterministic subspace gate.
    if not multilinear_rank_le_2(t):
        raise ClassificationInconsistencyError(
            "hyperdeterminant vanished on all samples but some multilinear rank "
            "exceeds 2; the seed produced degenerate compressions, retry"
        )
    c3 = gap_constant(3)
    return ClassificationReport(
        trichotomy=TrichotomyClass.W_ISOMORPHIC,
        rank_signature=signature,
        cayley_samples=tuple(samples),
        asymptotic_class=AsymptoticClass.C3,
        constant=GapValue(c3[0], c3[1]),
        confidence=Confidence.randomized(trials),
    )


def gap_class(report: ClassificationReport):
    """Asymptotic-subrank class and constant from a classification report."""
    label = report.trichotomy
    if label is TrichotomyClass.FLATTENING_RANK_ONE:
        return AsymptoticClass.ONE, GapValue("1", 1.0)
    if label is TrichotomyClass.W_ISOMORPHIC:
        desc, dec = gap_constant(3)
        return AsymptoticClass.C3, GapValue(desc, dec)
    return AsymptoticClass.AT_LEAST_TWO, GapValue("2", 2.0, lower_bound_only=True)


def gap_constant(k: int):
    """The gap constant for order k: k/(k-1)^((k-1)/k), equal to 2^h(1/k).

    Returns (exact description, decimal).  Both closed forms are evaluated in
    floating point and must agree to 1e-12.
    """
    if k < 2:
        raise ValueError("gap constant needs k >= 2")
    direct = k / (k - 1) ** ((k - 1) / k) if k > 2 else 2.0
    x = 1.0 / k
    entropy = -(x * math.log2(x) + (1 - x) * math.log2(1 - x))
    via_entropy = 2.0**entropy
    if abs(direct - via_entropy) > 1e-12:
        raise AssertionError(
            f"gap constant formulas disagree at k={k}: {direct!r} vs {via_entropy!r}"
        )
    return f"{k}/{k - 1}^({k - 1}/{k})", direct
