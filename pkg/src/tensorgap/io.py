"""Versioned JSON document formats for tensors and degeneration certificates.

Tensor documents carry the field, the dimensions, and a sparse entry list;
omitted entries are zero.  Certificate documents carry the field, source and
target tensors, the optional compression maps with exact scalar entries, and
one curve matrix per factor whose rational-function entries are serialized as
two coefficient lists ("num-coeffs", "den-coeffs") read from eps^0 upward.
Parsing and printing are exact inverses of each other; every malformed input
is reported with a document location.
"""

from __future__ import annotations

import json

from .degeneration import DegenerationCertificate
from .errors import DocumentFormatError
from .fields import GF, QQ, FieldSpec, Scalar
from .linalg import Matrix
from .ratfunc import EpsField, Poly, RatFunc
from .tensors import Tensor

FORMAT_VERSION = 1


def _field_name(field: FieldSpec) -> str:
    return field.name


def _parse_field(name, location) -> FieldSpec:
    if not isinstance(name, str):
        raise DocumentFormatError("field must be a string", location)
    if name == "Q":
        return QQ
    if name.startswith("F"):
        try:
            p = int(name[1:])
        except ValueError:
            raise DocumentFormatError(f"bad field name {name!r}", location) from None
        try:
            return GF(p)
        except ValueError as exc:
            raise DocumentFormatError(f"modulus must be prime: {exc}", location) from None
    raise DocumentFormatError(f"unknown field {name!r}", location)


def _check_format(doc, kind, location):
    if not isinstance(doc, dict):
        raise DocumentFormatError("document must be a JSON object", location)
    version = doc.get("format")
    if version != FORMAT_VERSION:
        raise DocumentFormatError(f"unsupported format version {version!r}", location)
    if doc.get("kind") != kind:
        raise DocumentFormatError(f"expected kind {kind!r}, got {doc.get('kind')!r}", location)


# -- tensors -------------------------------------------------------------------


def tensor_to_document(t: Tensor) -> dict:
    if not isinstance(t.ring, FieldSpec):
        raise DocumentFormatError("only base-field tensors are serialized")
    entries = []
    for flat, e in enumerate(t.entries):
        if e:
            entries.append([list(t.multi_index(flat)), e.text()])
    return {
        "format": FORMAT_VERSION,
        "kind": "tensor",
        "field": _field_name(t.ring),
        "dims": list(t.dims),
        "entries": entries,
    }


def tensor_from_document(doc, location="tensor") -> Tensor:
    _check_format(doc, "tensor", location)
    field = _parse_field(doc.get("field"), f"{location}.field")
    dims = doc.get("dims")
    if (
        not isinstance(dims, list)
        or not dims
        or not all(isinstance(d, int) and d >= 1 for d in dims)
    ):
        raise DocumentFormatError(f"bad dims {dims!r}", f"{location}.dims")
    dims = tuple(dims)
    raw = doc.get("entries")
    if not isinstance(raw, list):
        raise DocumentFormatError("entries must be a list", f"{location}.entries")
    items = {}
    for n, pair in enumerate(raw):
        where = f"{location}.entries[{n}]"
        if not (isinstance(pair, list) and len(pair) == 2):
            raise DocumentFormatError("entry must be [index, value]", where)
        idx, text = pair
        if not (isinstance(idx, list) and len(idx) == len(dims)):
            raise DocumentFormatError(f"index {idx!r} has wrong length", where)
        if not all(isinstance(i, int) and 0 <= i < d for i, d in zip(idx, dims)):
            raise DocumentFormatError(f"index {idx!r} out of range for dims {list(dims)}", where)
        key = tuple(idx)
        if key in items:
            raise DocumentFormatError(f"duplicate index {idx!r}", where)
        try:
            items[key] = field.parse(str(text))
        except ValueError as exc:
            raise DocumentFormatError(str(exc), where) from None
    return Tensor.from_dict(field, dims, items)


def save_tensor(t: Tensor, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(tensor_to_document(t), fh, indent=2)
        fh.write("\n")


def load_tensor(path) -> Tensor:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentFormatError(f"invalid JSON: {exc}", str(path)) from None
    return tensor_from_document(doc, location=str(path))


# -- matrices ------------------------------------------------------------------


def _scalar_matrix_to_document(m: Matrix) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [e.text() for e in m.entries],
    }


def _scalar_matrix_from_document(doc, field, location) -> Matrix:
    if not isinstance(doc, dict):
        raise DocumentFormatError("matrix must be an object", location)
    rows, cols = doc.get("rows"), doc.get("cols")
    entries = doc.get("entries")
    if not (isinstance(rows, int) and isinstance(cols, int) and isinstance(entries, list)):
        raise DocumentFormatError("matrix needs rows, cols, entries", location)
    if len(entries) != rows * cols:
        raise DocumentFormatError(
            f"{rows}x{cols} matrix with {len(entries)} entries", location
        )
    try:
        parsed = [field.parse(str(e)) for e in entries]
    except ValueError as exc:
        raise DocumentFormatError(str(exc), location) from None
    return Matrix(field, rows, cols, parsed)


def _poly_coeff_list(poly: Poly, field) -> list:
    if not poly.coeffs:
        return ["0"]
    return [Scalar(field, c).text() for c in poly.coeffs]


def _curve_matrix_to_document(m: Matrix) -> dict:
    base = m.ring.base
    entries = []
    for e in m.entries:
        entries.append(
            {
                "num-coeffs": _poly_coeff_list(e.num, base),
                "den-coeffs": _poly_coeff_list(e.den, base),
            }
        )
    return {"rows": m.rows, "cols": m.cols, "entries": entries}


def _curve_matrix_from_document(doc, field, location) -> Matrix:
    if not isinstance(doc, dict):
        raise DocumentFormatError("curve matrix must be an object", location)
    rows, cols = doc.get("rows"), doc.get("cols")
    entries = doc.get("entries")
    if not (isinstance(rows, int) and isinstance(cols, int) and isinstance(entries, list)):
        raise DocumentFormatError("curve matrix needs rows, cols, entries", location)
    if len(entries) != rows * cols:
        raise DocumentFormatError(
            f"{rows}x{cols} curve matrix with {len(entries)} entries", location
        )
    ring = EpsField(field)
    parsed = []
    for n, e in enumerate(entries):
        where = f"{location}.entries[{n}]"
        if not isinstance(e, dict) or "num-coeffs" not in e or "den-coeffs" not in e:
            raise DocumentFormatError("curve entry needs num-coeffs and den-coeffs", where)
        try:
            num = Poly(field, [field.parse(str(c)).value for c in e["num-coeffs"]])
            den = Poly(field, [field.parse(str(c)).value for c in e["den-coeffs"]])
        except ValueError as exc:
            raise DocumentFormatError(str(exc), where) from None
        if not den:
            raise DocumentFormatError("curve entry has zero denominator", where)
        parsed.append(RatFunc(num, den))
    return Matrix(ring, rows, cols, parsed)


# -- certificates ----------------------------------------------------------------


def certificate_to_document(cert: DegenerationCertificate) -> dict:
    field = cert.source.ring
    doc = {
        "format": FORMAT_VERSION,
        "kind": "certificate",
        "field": _field_name(field),
        "order": cert.order,
        "source": tensor_to_document(cert.source),
        "target": tensor_to_document(cert.target),
        "compression": None
        if cert.compression is None
        else [_scalar_matrix_to_document(m) for m in cert.compression],
        "curves": [_curve_matrix_to_document(m) for m in cert.curves],
    }
    return doc


def certificate_from_document(doc, location="certificate") -> DegenerationCertificate:
    _check_format(doc, "certificate", location)
    field = _parse_field(doc.get("field"), f"{location}.field")
    source = tensor_from_document(doc.get("source"), f"{location}.source")
    target = tensor_from_document(doc.get("target"), f"{location}.target")
    if source.ring != field or target.ring != field:
        raise DocumentFormatError("source/target field disagrees with certificate field", location)
    order = doc.get("order")
    if order != target.order:
        raise DocumentFormatError(f"order {order!r} does not match target", location)
    compression = doc.get("compression")
    maps = None
    if compression is not None:
        if not isinstance(compression, list) or len(compression) != source.order:
            raise DocumentFormatError("compression needs one map per factor", location)
        maps = tuple(
            _scalar_matrix_from_document(m, field, f"{location}.compression[{j}]")
            for j, m in enumerate(compression)
        )
    curves_doc = doc.get("curves")
    if not isinstance(curves_doc, list) or len(curves_doc) != target.order:
        raise DocumentFormatError("curves needs one matrix per factor", location)
    curves = tuple(
        _curve_matrix_from_document(m, field, f"{location}.curves[{j}]")
        for j, m in enumerate(curves_doc)
    )
    return DegenerationCertificate(
        source=source, target=target, curves=curves, compression=maps
    )


def save_certificate(cert: DegenerationCertificate, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(certificate_to_document(cert), fh, indent=2)
        fh.write("\n")


def load_certificate(path) -> DegenerationCertificate:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentFormatError(f"invalid JSON: {exc}", str(path)) from None
    return certificate_from_document(doc, location=str(path))
