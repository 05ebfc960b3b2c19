"""JSON system and algebra files.

Scalars are written as ``"p/q"`` strings when rational,
``{"exact": {"<radicand>": "p/q", ...}}`` for surds (radicand 1 is the
rational part, a negative radicand ``-m`` means ``i*sqrt(m)``) and
``{"numeric": [re, im]}`` otherwise.  Exact data round-trips losslessly.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .algebra import FREE, SymmetryAlgebra
from .exppoly import ExpPoly
from .fields import PROJECTIVE, ProjectiveVectorField, VectorField
from .matrix import Matrix
from .scalars import QuadExtScalar, rational, surd
from .structure import COMPLEX, REAL, JordanStructure, NonCommutingError, SystemSpec

ALGEBRA_FORMAT = "linsym.algebra"


class ParseError(ValueError):
    """Malformed system or algebra file."""


# scalars --------------------------------------------------------------------

def encode_scalar(x):
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return str(Fraction(x))
    if isinstance(x, QuadExtScalar):
        return {"exact": {str(k): str(v) for k, v in sorted(x.parts.items())}}
    z = complex(x)
    return {"numeric": [z.real, z.imag]}


def decode_scalar(obj):
    if isinstance(obj, bool):
        raise ParseError("booleans are not scalars")
    if isinstance(obj, (int, str)):
        try:
            return rational(obj)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational {obj!r}") from exc
    if isinstance(obj, dict) and len(obj) == 1:
        if "exact" in obj:
            try:
                return surd({int(k): rational(v) for k, v in obj["exact"].items()})
            except (ValueError, TypeError, AttributeError) as exc:
                raise ParseError(f"bad exact scalar {obj!r}") from exc
        if "numeric" in obj:
            val = obj["numeric"]
            if not (isinstance(val, list) and len(val) == 2):
                raise ParseError(f"numeric scalar needs [re, im], got {val!r}")
            return complex(float(val[0]), float(val[1]))
    raise ParseError(f"cannot read scalar {obj!r}")


def _rational_entry(obj) -> Fraction:
    if isinstance(obj, bool) or not isinstance(obj, (int, str)):
        raise ParseError(f"matrix entries must be integers or 'p/q' strings, got {obj!r}")
    return decode_scalar(obj)


def encode_matrix(m: Matrix) -> list:
    return [[encode_scalar(v) for v in row] for row in m.to_rows()]


def decode_matrix(obj, n: int | None = None, rational_only: bool = False) -> Matrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ParseError("matrix must be a non-empty array of arrays")
    size = len(obj)
    if any(len(r) != size for r in obj):
        raise ParseError("matrix must be square")
    if n is not None and size != n:
        raise ParseError(f"matrix is {size}×{size}, expected n = {n}")
    read = _rational_entry if rational_only else decode_scalar
    return Matrix(size, size, [read(v) for r in obj for v in r])


# system files ---------------------------------------------------------------

def _block(obj):
    if not isinstance(obj, dict) or "eig" not in obj or "size" not in obj:
        raise ParseError(f"jordan block needs 'eig' and 'size': {obj!r}")
    size = obj["size"]
    if isinstance(size, bool) or not isinstance(size, int) or size < 1:
        raise ParseError(f"block size must be a positive integer: {size!r}")
    eig = obj["eig"]
    if isinstance(eig, dict):
        if set(eig) != {"mu", "nu"}:
            raise ParseError("a rotation block is written {'mu': ..., 'nu': ...}")
        return None, (_rational_entry(eig["mu"]), _rational_entry(eig["nu"]), size)
    return (_rational_entry(eig), size), None


def parse_system(doc: dict) -> SystemSpec:
    if not isinstance(doc, dict):
        raise ParseError("system file must hold an object")
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int):
        raise ParseError("'n' must be an integer")
    field = doc.get("field", COMPLEX)
    if field not in (REAL, COMPLEX):
        raise ParseError(f"'field' must be 'real' or 'complex', got {field!r}")
    kinds = [k for k in ("A", "D", "jordan_blocks") if k in doc]
    if "B" in doc and "A" not in doc:
        raise ParseError("'B' given without 'A'")
    if len(kinds) != 1:
        raise ParseError("give exactly one of 'A' and 'B', 'D', or 'jordan_blocks'")
    kind = kinds[0]
    try:
        if kind == "A":
            if "B" not in doc:
                raise ParseError("'A' given without 'B'")
            A = decode_matrix(doc["A"], n, rational_only=True)
            B = decode_matrix(doc["B"], n, rational_only=True)
            return SystemSpec(n, field, A=A, B=B, has_forcing="C" in doc)
        if kind == "D":
            return SystemSpec(n, field, D=decode_matrix(doc["D"], n, rational_only=True))
        raw = doc["jordan_blocks"]
        if not isinstance(raw, list) or not raw:
            raise ParseError("'jordan_blocks' must be a non-empty list")
        blocks, rots = [], []
        for item in raw:
            b, r = _block(item)
            if b:
                blocks.append(b)
            else:
                rots.append(r)
        return SystemSpec(n, field, jordan=JordanStructure.make(blocks, rots, field))
    except (NonCommutingError, ParseError):
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def load_system(path) -> SystemSpec:
    return parse_system(_read_json(path))


# algebra files --------------------------------------------------------------

def _encode_exppoly(f: ExpPoly) -> list:
    return [{"coef": encode_scalar(c), "power": k, "freq": encode_scalar(w)} for c, k, w in f.terms]


def _decode_exppoly(obj) -> ExpPoly:
    if not isinstance(obj, list):
        raise ParseError("exp-polynomial must be a list of terms")
    terms = []
    for t in obj:
        try:
            power = t["power"]
            if isinstance(power, bool) or not isinstance(power, int) or power < 0:
                raise ParseError(f"bad power {power!r}")
            terms.append((decode_scalar(t["coef"]), power, decode_scalar(t["freq"])))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad exp-polynomial term {t!r}") from exc
    return ExpPoly(terms)


def _encode_monomials(records) -> list:
    return [{"coef": encode_scalar(c), "t": k, "x": list(m)} for c, k, m in records]


def _decode_monomials(obj, n: int) -> list:
    out = []
    for r in obj:
        try:
            xs = r["x"]
            if len(xs) != n:
                raise ParseError("monomial exponent vector has the wrong length")
            out.append((decode_scalar(r["coef"]), int(r["t"]), [int(e) for e in xs]))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad monomial record {r!r}") from exc
    return out


def encode_generator(g) -> dict:
    if isinstance(g, VectorField):
        return {"family": g.family, "c1": encode_scalar(g.c1), "c0": encode_scalar(g.c0),
                "H": encode_matrix(g.H), "phi": [_encode_exppoly(f) for f in g.phi]}
    xi, eta = g.monomial_records()
    return {"family": g.family, "xi": _encode_monomials(xi), "eta": [_encode_monomials(e) for e in eta]}


def decode_generator(obj, n: int):
    if not isinstance(obj, dict) or "family" not in obj:
        raise ParseError("generator record needs a 'family'")
    try:
        if "xi" in obj:
            eta = obj["eta"]
            if len(eta) != n:
                raise ParseError("projective generator has the wrong number of components")
            return ProjectiveVectorField.from_monomials(
                n, _decode_monomials(obj["xi"], n), [_decode_monomials(e, n) for e in eta], obj["family"])
        phi = obj["phi"]
        if len(phi) != n:
            raise ParseError("drift has the wrong length")
        return VectorField(decode_scalar(obj["c1"]), decode_scalar(obj["c0"]),
                           decode_matrix(obj["H"], n), tuple(_decode_exppoly(f) for f in phi), obj["family"])
    except KeyError as exc:
        raise ParseError(f"generator record missing {exc}") from exc
    except ParseError:
        raise
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad generator record: {exc}") from exc


def algebra_to_dict(alg: SymmetryAlgebra) -> dict:
    return {
        "format": ALGEBRA_FORMAT,
        "n": alg.n,
        "field": alg.field,
        "dimension": alg.dimension,
        "classification": alg.classification,
        "N": alg.N,
        "exact": alg.is_exact(),
        "J": encode_matrix(alg.J),
        "generators": [encode_generator(g) for g in alg.generators],
    }


def algebra_from_dict(doc: dict) -> SymmetryAlgebra:
    if not isinstance(doc, dict) or doc.get("format") != ALGEBRA_FORMAT:
        raise ParseError("not an algebra file")
    try:
        n = int(doc["n"])
        J = decode_matrix(doc["J"], n)
        gens = [decode_generator(g, n) for g in doc["generators"]]
        return SymmetryAlgebra(gens, int(doc["dimension"]), doc["classification"], int(doc["N"]),
                               doc.get("field", COMPLEX), J)
    except KeyError as exc:
        raise ParseError(f"algebra file missing {exc}") from exc
    except ParseError:
        raise
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc)) from exc


def save_algebra(alg: SymmetryAlgebra, path) -> None:
    Path(path).write_text(json.dumps(algebra_to_dict(alg), indent=1, ensure_ascii=False) + "\n",
                          encoding="utf-8")


def load_algebra(path) -> SymmetryAlgebra:
    return algebra_from_dict(_read_json(path))


def is_free(alg: SymmetryAlgebra) -> bool:
    return alg.classification == FREE or any(g.family == PROJECTIVE for g in alg.generators)
