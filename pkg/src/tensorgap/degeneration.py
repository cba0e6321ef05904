"""Degeneration certificates over K(eps) and their constructive builder.

A :class:`DegenerationCertificate` holds a source tensor T, a target S of the
same shape as the (optionally compressed) source, and one square curve matrix
over K(eps) per factor.  It witnesses that S lies in the orbit closure of T:
applying the curves must produce S + O(eps), which is checked by exact
expansion at eps = 0 (every entry has valuation >= 0 and the eps^0
coefficient tensor equals S).  Verification is a value, never an error, and
works over any supported coefficient field.

The builder realizes the constructive induction that pulls the order-k
W-tensor out of any tensor of partition rank at least two:

* compress to shape (2, ..., 2) by a seeded random restriction;
* split off a slice S of partition rank >= 2 along the last factor and
  recursively drive S to the W-tensor of order k-1;
* transport the 2-plane spanned by the two slices along the recursive curve,
  extract a leading coefficient P independent of the W-tensor (a valuation
  reduction in the exterior square, replacing power-series bookkeeping),
  feed it to the stabilizer curves (a shear making the corner coefficient
  nonzero when needed, then the weighted scaling curve), and slow the inner
  curve down (eps -> eps^N) until the Grassmannian limit is exactly the
  plane of the W-tensor's last flattening;
* recover the final factor by solving the flattening-image matching system
  over K(eps).

Everything is exact; the only randomness is the compression seed, and the
constructed certificate is re-verified before being returned.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import (
    CertificateConstructionError,
    DegenerateSpanError,
    DimensionMismatchError,
    FieldMismatchError,
    SingularCurveError,
)
from .fields import QQ, FieldSpec, Scalar
from .linalg import Matrix, lift_matrix, mat_det, mat_inverse, mat_rank, mat_solve, substitute_matrix
from .ratfunc import EpsField
from .ranks import DEFAULT_START_BOUND, generic_compress, has_rank_one_flattening
from .tensors import (
    Tensor,
    as_matrix,
    lift_tensor,
    restrict,
    unit_tensor,
    w_tensor,
)

SLICE_COMBO_BOUND = 8
SHEAR_BOX_BOUND = 8
SLOWDOWN_BOUND = 24
DVR_MAX_STEPS = 128


@dataclass(frozen=True)
class DegenerationCertificate:
    """Curves over K(eps) witnessing that target = limit of curve * source."""

    source: Tensor
    target: Tensor
    curves: tuple  # one square Matrix over K(eps) per factor
    compression: tuple | None = None  # optional base-field maps applied first

    def __post_init__(self):
        if self.source.order != self.target.order:
            raise DimensionMismatchError("source and target orders differ")
        if len(self.curves) != self.target.order:
            raise DimensionMismatchError("one curve matrix per factor is required")

    @property
    def order(self) -> int:
        return self.target.order

    def compressed_source(self) -> Tensor:
        if self.compression is None:
            return self.source
        return restrict(self.source, self.compression)


@dataclass(frozen=True)
class ExpansionRecord:
    """Exact Laurent data of curve * source, entry by entry.

    `order_m` is the most negative valuation found (clamped at 0); per entry
    the record stores the valuation and the coefficients at eps^-m .. eps^0.
    """

    dims: tuple
    valuations: tuple
    order_m: int
    coefficients: tuple  # per entry: tuple of Scalars at exponents -m..0
    constant_term: Tensor

    @property
    def min_valuation(self):
        return min(self.valuations)


@dataclass(frozen=True)
class VerificationResult:
    accepted: bool
    condition: str | None = None  # singular-curve | negative-valuation | constant-term-mismatch
    detail: str | None = None

    def __bool__(self):
        return self.accepted


# -- expansion helpers -----------------------------------------------------------


def tensor_min_valuation(t: Tensor):
    """Minimum entry valuation of a K(eps) tensor (+inf when zero)."""
    v = math.inf
    for e in t.entries:
        if e:
            v = min(v, e.valuation())
    return v


def eps_coefficient_tensor(t: Tensor, exponent: int) -> Tensor:
    """The base-field tensor of Laurent coefficients at a fixed exponent."""
    ring = t.ring
    if not isinstance(ring, EpsField):
        raise FieldMismatchError("coefficient extraction needs a K(eps) tensor")
    return Tensor(ring.base, t.dims, [e.coefficient(exponent) for e in t.entries])


def _expand(base_tensor: Tensor, curves) -> Tensor:
    eps_ring = curves[0].ring
    if not isinstance(eps_ring, EpsField):
        raise FieldMismatchError("curves must be K(eps) matrices")
    return restrict(lift_tensor(base_tensor, eps_ring), curves)


def apply_certificate(cert: DegenerationCertificate) -> ExpansionRecord:
    """Expand curve * (compressed) source exactly at eps = 0.

    Raises SingularCurveError when a curve matrix has determinant zero.
    """
    compressed = cert.compressed_source()
    for j, curve in enumerate(cert.curves):
        if curve.rows != curve.cols:
            raise DimensionMismatchError(f"curve {j} is not square")
        if not mat_det(curve):
            raise SingularCurveError(f"curve {j} has determinant identically zero")
    expanded = _expand(compressed, cert.curves)
    valuations = tuple(e.valuation() if e else math.inf for e in expanded.entries)
    finite = [v for v in valuations if v != math.inf]
    m = max(0, -min(finite)) if finite else 0
    base = compressed.ring if isinstance(compressed.ring, FieldSpec) else compressed.ring.base
    coeff_rows = []
    for e in expanded.entries:
        coeff_rows.append(tuple(e.coefficient(x) for x in range(-m, 1)))
    constant = Tensor(base, expanded.dims, [row[-1] for row in coeff_rows])
    return ExpansionRecord(
        dims=expanded.dims,
        valuations=valuations,
        order_m=m,
        coefficients=tuple(coeff_rows),
        constant_term=constant,
    )


def verify_certificate(cert: DegenerationCertificate) -> VerificationResult:
    """Accept iff curves are invertible, the expansion has no pole, and the
    eps^0 coefficient tensor equals the target exactly."""
    compressed = cert.compressed_source()
    if compressed.dims != cert.target.dims:
        raise DimensionMismatchError(
            f"(compressed) source dims {compressed.dims} != target dims {cert.target.dims}"
        )
    for j, curve in enumerate(cert.curves):
        if curve.rows != curve.cols or curve.rows != compressed.dims[j]:
            raise DimensionMismatchError(f"curve {j} has the wrong shape")
        if not mat_det(curve):
            return VerificationResult(
                False, "singular-curve", f"curve {j} has determinant identically zero"
            )
    expanded = _expand(compressed, cert.curves)
    for flat, e in enumerate(expanded.entries):
        if e and e.valuation() < 0:
            idx = expanded.multi_index(flat)
            return VerificationResult(
                False,
                "negative-valuation",
                f"entry {idx} has a pole of order {-e.valuation()} at eps = 0",
            )
    constant = eps_coefficient_tensor(expanded, 0)
    if constant != cert.target:
        for flat in range(constant.size):
            if constant.entries[flat] != cert.target.entries[flat]:
                idx = constant.multi_index(flat)
                return VerificationResult(
                    False,
                    "constant-term-mismatch",
                    f"entry {idx}: eps^0 coefficient {constant.entries[flat]} "
                    f"!= target {cert.target.entries[flat]}",
                )
    return VerificationResult(True)


# -- stabilizer curves of the W-tensor -------------------------------------------


def stab_scaling_curve(k: int, field: FieldSpec):
    """The diagonal curve diag(eps^-1, eps^(k-1)) and its eps^k prefactor.

    The k-fold tuple of the diagonal lies in the stabilizer of the order-k
    W-tensor; with the prefactor absorbed, the assembled tuple scales the
    basis tensor with 0/1 indices i by eps^(k * sum(i)).
    """
    if k < 2:
        raise ValueError("scaling curve needs k >= 2")
    ring = EpsField(field)
    h = Matrix(ring, 2, 2, [ring.eps(-1), ring.zero(), ring.zero(), ring.eps(k - 1)])
    return h, ring.eps(k)


def scaling_map_tuple(k: int, field: FieldSpec):
    """The assembled k-factor scaling tuple, prefactor folded into factor 0."""
    h, prefactor = stab_scaling_curve(k, field)
    return (h.scale(prefactor),) + (h,) * (k - 1)


def stab_shear(scalars, field: FieldSpec | None = None):
    """Upper-triangular shears [[1, s_j], [0, 1]], one per factor.

    The entries must sum to zero; the resulting tuple then fixes the W-tensor
    of matching order exactly.
    """
    scalars = list(scalars)
    if field is None:
        if not scalars or not isinstance(scalars[0], Scalar):
            raise ValueError("pass a field or a nonempty list of Scalars")
        field = scalars[0].field
    values = [field.coerce(s) for s in scalars]
    total = field.zero()
    for v in values:
        total = total + v
    if total:
        raise ValueError(f"shear parameters must sum to zero, got {total}")
    one, zero = field.one(), field.zero()
    return tuple(Matrix(field, 2, 2, [one, v, zero, one]) for v in values)


# -- Pluecker coordinates and Grassmannian transport ------------------------------


@dataclass(frozen=True)
class WedgePoint:
    """Coordinates of S ^ S' in the exterior square of the flattened space.

    Stored strictly upper-triangular: coordinate (a, b) with a < b over flat
    entry indices, lexicographic.  Nonzero iff S and S' are independent.
    """

    ring: object
    ambient_dim: int
    coords: tuple

    def is_zero(self) -> bool:
        return not any(self.coords)

    def proportional_to(self, other: "WedgePoint") -> bool:
        """Whether two nonzero wedge points agree up to a nonzero scalar."""
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError("wedge points from different ambient spaces")
        if self.is_zero() or other.is_zero():
            return False
        n = len(self.coords)
        for i in range(n):
            for j in range(i + 1, n):
                if self.coords[i] * other.coords[j] != self.coords[j] * other.coords[i]:
                    return False
        return True


def pluecker_wedge(s: Tensor, s_prime: Tensor) -> WedgePoint:
    """The wedge S ^ S' of two same-shape tensors, over K or K(eps)."""
    if s.dims != s_prime.dims:
        raise DimensionMismatchError("wedge needs tensors of equal dims")
    if s.ring != s_prime.ring:
        raise FieldMismatchError("wedge needs tensors over a common ring")
    a = s.entries
    b = s_prime.entries
    n = len(a)
    coords = []
    for i in range(n):
        for j in range(i + 1, n):
            coords.append(a[i] * b[j] - a[j] * b[i])
    return WedgePoint(s.ring, n, tuple(coords))


def grassmann_degenerates(curves, e_t, e_s) -> bool:
    """Whether the curves carry the plane spanned by e_t to the plane of e_s.

    e_t and e_s are pairs of tensors spanning 2-planes (base field); the
    transported wedge is divided by its minimal eps power and the eps^0
    coefficient vector must be a nonzero scalar multiple of the wedge of e_s.
    Projective normalization is deliberate: Grassmannian points carry no
    preferred scale.
    """
    t0, t1 = e_t
    s0, s1 = e_s
    if pluecker_wedge(t0, t1).is_zero():
        raise DegenerateSpanError("e_t pair is linearly dependent")
    target = pluecker_wedge(s0, s1)
    if target.is_zero():
        raise DegenerateSpanError("e_s pair is linearly dependent")
    curves = tuple(curves)
    eps_ring = curves[0].ring
    a = restrict(lift_tensor(t0, eps_ring), curves)
    b = restrict(lift_tensor(t1, eps_ring), curves)
    wedge = pluecker_wedge(a, b)
    if wedge.is_zero():
        return False
    v = min(c.valuation() for c in wedge.coords if c)
    base = eps_ring.base
    limit = WedgePoint(base, wedge.ambient_dim, tuple(c.coefficient(v) for c in wedge.coords))
    return limit.proportional_to(target)


# -- explicit unit-to-W certificate ------------------------------------------------


def unit_to_w_certificate(k: int, field: FieldSpec = QQ) -> DegenerationCertificate:
    """The classical border-rank-2 curve carrying I_{k,2} onto the W-tensor.

    The two diagonal legs are mapped to -e0/eps and (e0 + eps*e1)/eps in the
    first factor and to e0, e0 + eps*e1 elsewhere, so the sum expands as
    (1/eps) * ((e0 + eps*e1)^(x)k - e0^(x)k) = W_k + O(eps).
    """
    if k < 2:
        raise ValueError("unit-to-W certificate needs k >= 2")
    ring = EpsField(field)
    one = ring.one()
    zero = ring.zero()
    eps = ring.eps()
    inv_eps = ring.eps(-1)
    first = Matrix(ring, 2, 2, [-inv_eps, inv_eps, zero, one])
    rest = Matrix(ring, 2, 2, [one, one, zero, eps])
    return DegenerationCertificate(
        source=unit_tensor(k, 2, field),
        target=w_tensor(k, (2,) * k, field),
        curves=(first,) + (rest,) * (k - 1),
    )


# -- constructive certificate builder ----------------------------------------------


def _proportionality(t: Tensor, w: Tensor):
    """The scalar lam with t = lam * w, or None when independent (w != 0)."""
    pivot = next(i for i, e in enumerate(w.entries) if e)
    lam = t.entries[pivot] / w.entries[pivot]
    return lam if t == w.scale(lam) else None


def _extract_independent_coefficient(a: Tensor, b: Tensor, w: Tensor) -> Tensor:
    """First coefficient of b, reduced modulo multiples of a, independent of w.

    a must satisfy a = w + O(eps) exactly.  This is the valuation-reduction
    form of picking the first series coefficient of the transported second
    basis vector that leaves the span of the W-tensor; it terminates because
    each reduction step strictly lowers the valuation of the wedge a ^ b.
    """
    eps_ring = a.ring
    for _ in range(DVR_MAX_STEPS):
        if b.is_zero():
            raise DegenerateSpanError("transported pair collapsed to one dimension")
        v = tensor_min_valuation(b)
        if v != 0:
            b = b.scale(eps_ring.eps(-v))
        b0 = eps_coefficient_tensor(b, 0)
        lam = _proportionality(b0, w)
        if lam is None:
            return b0
        b = b - a.scale(eps_ring.lift(lam))
    raise CertificateConstructionError(
        "valuation reduction failed to find an independent coefficient"
    )


def _dvr_reduce_pair(a: Tensor, b: Tensor):
    """Normalize a pair of K(eps) tensors until the leading coefficients are
    independent; returns (a, b, a0, b0)."""
    eps_ring = a.ring
    va = tensor_min_valuation(a)
    if va == math.inf:
        raise DegenerateSpanError("first transported vector vanishes")
    if va != 0:
        a = a.scale(eps_ring.eps(-va))
    for _ in range(DVR_MAX_STEPS):
        vb = tensor_min_valuation(b)
        if vb == math.inf:
            raise DegenerateSpanError("transported pair collapsed to one dimension")
        if vb != 0:
            b = b.scale(eps_ring.eps(-vb))
        a0 = eps_coefficient_tensor(a, 0)
        b0 = eps_coefficient_tensor(b, 0)
        stacked = Matrix(
            a0.ring, 2, a0.size, list(a0.entries) + list(b0.entries)
        )
        if mat_rank(stacked) == 2:
            return a, b, a0, b0
        lam = _proportionality(b0, a0)
        b = b - a.scale(eps_ring.lift(lam))
    raise CertificateConstructionError("leading-coefficient reduction did not terminate")


def _solve_in_plane(a0: Tensor, b0: Tensor, target: Tensor):
    """Coefficients (x, y) with x*a0 + y*b0 = target, or None."""
    field = a0.ring
    m = Matrix(
        field,
        a0.size,
        2,
        [v for pair in zip(a0.entries, b0.entries) for v in pair],
    )
    return mat_solve(m, list(target.entries))


def _choose_slice_combo(t: Tensor):
    """Small integer coefficients (alpha, beta) giving a last-axis slice
    combination of partition rank >= 2, with the combination itself."""
    field = t.ring
    axis = t.order - 1
    s0 = t.slice_along(axis, 0)
    s1 = t.slice_along(axis, 1)
    for bound in range(1, SLICE_COMBO_BOUND + 1):
        for alpha, beta in itertools.product(range(-bound, bound + 1), repeat=2):
            if max(abs(alpha), abs(beta)) != bound:
                continue
            s = s0.scale(field.from_int(alpha)) + s1.scale(field.from_int(beta))
            if s.is_zero():
                continue
            if has_rank_one_flattening(s) is None:
                return (alpha, beta), s
    raise CertificateConstructionError(
        "no slice combination of partition rank >= 2 found; "
        "the input violates the partition-rank precondition"
    )


def _find_shear(p: Tensor):
    """Deterministic integer shear parameters (sum zero) giving the corner
    coefficient of shear * p a nonzero value; identity when already nonzero."""
    field = p.ring
    k = p.order
    corner = (0,) * k
    if p[corner]:
        return None
    for bound in range(1, SHEAR_BOX_BOUND + 1):
        for head in itertools.product(range(-bound, bound + 1), repeat=k - 1):
            last = -sum(head)
            if abs(last) > bound:
                continue
            s = head + (last,)
            if all(x == 0 for x in s):
                continue
            shear = stab_shear([field.from_int(x) for x in s])
            if restrict(p, shear)[corner]:
                return shear
    raise CertificateConstructionError(
        "no shear with zero parameter sum exposes the corner coefficient; "
        "this contradicts the square-free-monomial argument"
    )


def _certify_cube(t: Tensor):
    """Curves carrying a (2, ..., 2) tensor with no rank-one flattening onto
    the W-tensor of the same order: restrict(t, curves) = W + O(eps) exactly."""
    field = t.ring
    eps_ring = EpsField(field)
    k = t.order
    if k == 2:
        m = as_matrix(t)
        w2 = Matrix(field, 2, 2, [field.zero(), field.one(), field.one(), field.zero()])
        g = w2 * mat_inverse(m)
        return (lift_matrix(g, eps_ring), Matrix.identity(eps_ring, 2))

    axis = k - 1
    s0 = t.slice_along(axis, 0)
    s1 = t.slice_along(axis, 1)
    (alpha, _), s = _choose_slice_combo(t)
    rec = _certify_cube(s)

    w_prev = w_tensor(k - 1, (2,) * (k - 1), field)
    corner_prev = Tensor.from_dict(field, (2,) * (k - 1), {(0,) * (k - 1): field.one()})

    # Complete s to a basis of the slice span and transport both vectors.
    a = restrict(lift_tensor(s, eps_ring), rec)
    s_comp = s1 if alpha else s0
    b = restrict(lift_tensor(s_comp, eps_ring), rec)
    p = _extract_independent_coefficient(a, b, w_prev)

    shear = _find_shear(p)
    scaling = scaling_map_tuple(k - 1, field)
    stab = scaling
    if shear is not None:
        stab = tuple(
            d * lift_matrix(m, eps_ring) for d, m in zip(scaling, shear)
        )

    for slowdown in range(1, SLOWDOWN_BOUND + 1):
        inner = rec if slowdown == 1 else tuple(substitute_matrix(m, slowdown) for m in rec)
        curve = tuple(d * m for d, m in zip(stab, inner))
        if not grassmann_degenerates(curve, (s0, s1), (w_prev, corner_prev)):
            continue
        # Recover the last factor from the flattening-image matching system.
        a_o = restrict(lift_tensor(s0, eps_ring), curve)
        b_o = restrict(lift_tensor(s1, eps_ring), curve)
        ra, rb, a0, b0 = _dvr_reduce_pair(a_o, b_o)
        top = _solve_in_plane(a0, b0, w_prev)
        bottom = _solve_in_plane(a0, b0, corner_prev)
        if top is None or bottom is None:
            raise CertificateConstructionError(
                "Grassmannian limit accepted but the plane does not contain "
                "the W-tensor and the corner tensor"
            )
        f_top = ra.scale(eps_ring.lift(top[0])) + rb.scale(eps_ring.lift(top[1]))
        f_bottom = ra.scale(eps_ring.lift(bottom[0])) + rb.scale(eps_ring.lift(bottom[1]))
        rows = []
        for f in (f_top, f_bottom):
            system = Matrix(
                eps_ring,
                f.size,
                2,
                [v for pair in zip(a_o.entries, b_o.entries) for v in pair],
            )
            sol = mat_solve(system, list(f.entries))
            if sol is None:
                raise CertificateConstructionError("flattening-image matching is inconsistent")
            rows.append(sol)
        x = Matrix(eps_ring, 2, 2, rows[0] + rows[1])
        if not mat_det(x):
            raise CertificateConstructionError("recovered final factor is singular")
        curves = curve + (x,)
        expanded = _expand(t, curves)
        if tensor_min_valuation(expanded) >= 0 and eps_coefficient_tensor(
            expanded, 0
        ) == w_tensor(k, (2,) * k, field):
            return curves
        raise CertificateConstructionError(
            "assembled curves failed exact verification despite an accepted "
            "Grassmannian limit"
        )
    raise CertificateConstructionError(
        f"no slowdown exponent up to {SLOWDOWN_BOUND} made the Grassmannian "
        f"limit match; this should be impossible"
    )


def construct_w_degeneration(
    t: Tensor, seed: int = 0, start_bound: int = DEFAULT_START_BOUND
) -> DegenerationCertificate:
    """A verified certificate that the W-tensor lies in the orbit closure of t.

    Requires partition rank >= 2 and a rational ground field: the genericity
    arguments behind the compression and the shear search need enough field
    elements, so over F_p the constructor refuses (verification, by contrast,
    works over any supported field).  Deterministic given the seed.
    """
    field = t.ring
    if not isinstance(field, FieldSpec):
        raise FieldMismatchError("construction expects a base-field tensor")
    if field.p is not None:
        raise FieldMismatchError(
            "certificate construction runs over Q only; F_p tensors can be "
            "verified but the generic searches need an infinite field"
        )
    if t.order < 2:
        raise DimensionMismatchError("construction needs order >= 2")
    if t.is_zero() or has_rank_one_flattening(t) is not None:
        raise ValueError("precondition violated: tensor must have partition rank >= 2")
    maps, cube = generic_compress(t, seed, start_bound=start_bound)
    curves = _certify_cube(cube)
    cert = DegenerationCertificate(
        source=t,
        target=w_tensor(t.order, (2,) * t.order, field),
        curves=curves,
        compression=maps,
    )
    result = verify_certificate(cert)
    if not result:
        raise CertificateConstructionError(
            f"constructed certificate rejected: {result.condition} ({result.detail})"
        )
    return cert
