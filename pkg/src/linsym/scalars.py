"""Exact scalars: rationals (``fractions.Fraction``) and multi-quadratic surds.

Rationals are plain :class:`fractions.Fraction` values.  Square roots of
rationals live in :class:`QuadExtScalar`, a finite sum ``sum q_m * sqrt(m)``
over signed square-free integers ``m``; a negative ``m`` stands for
``i*sqrt(|m|)``.  Arithmetic between surds with different radicands stays
exact, so several Jordan blocks with different eigenvalues can share one
computation.  Anything that cannot be represented exactly degrades to a
Python ``complex``.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

Scalar = Union[int, Fraction, "QuadExtScalar", complex, float]

ZERO = Fraction(0)
ONE = Fraction(1)


def rational(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as an exact rational")


@lru_cache(maxsize=4096)
def _prime_factors(k: int) -> tuple[int, ...]:
    out = []
    p = 2
    while p * p <= k:
        if k % p == 0:
            out.append(p)
            while k % p == 0:
                k //= p
        p += 1 if p == 2 else 2
    if k > 1:
        out.append(k)
    return tuple(out)


def _square_free_split(k: int) -> tuple[int, int]:
    """Return ``(s, m)`` with ``k = s*s*m`` and ``m`` square-free (k > 0)."""
    s, m = 1, 1
    for p in _prime_factors(k):
        e = 0
        while k % p == 0:
            k //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, m


def _mul_keys(a: int, b: int) -> tuple[int, int]:
    """sqrt(a) * sqrt(b) = coef * sqrt(key) for signed square-free a, b."""
    ua, ub = abs(a), abs(b)
    g = math.gcd(ua, ub)
    m = (ua // g) * (ub // g)
    neg_a, neg_b = a < 0, b < 0
    coef = -g if (neg_a and neg_b) else g
    return (-m if neg_a != neg_b else m), coef


def _generators(key: int) -> tuple[int, ...]:
    gens = _prime_factors(abs(key))
    return gens + (-1,) if key < 0 else gens


class QuadExtScalar:
    """Exact element of Q(sqrt(m1), ..., sqrt(mk), i).

    Never holds a pure rational: use :func:`surd` to build values, which
    collapses rational results back to ``Fraction``.
    """

    __slots__ = ("_parts", "_hash")

    def __init__(self, parts: dict[int, Fraction]):
        self._parts = parts
        self._hash = None

    @classmethod
    def from_sqrt(cls, base, radical_coeff, radicand):
        """``base + radical_coeff * sqrt(radicand)`` for rational inputs."""
        root = sqrt_exact(rational(radicand))
        return add(rational(base), mul(rational(radical_coeff), root))

    @property
    def parts(self) -> dict[int, Fraction]:
        return dict(self._parts)

    @property
    def base(self) -> Fraction:
        return self._parts.get(1, ZERO)

    def radicands(self) -> tuple[int, ...]:
        return tuple(sorted(k for k in self._parts if k != 1))

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QuadExtScalar):
            return other._parts
        if isinstance(other, (int, Fraction)):
            return {1: Fraction(other)} if other else {}
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return complex(self) + other
            return NotImplemented
        parts = dict(self._parts)
        for k, v in o.items():
            w = parts.get(k, ZERO) + v
            if w:
                parts[k] = w
            else:
                parts.pop(k, None)
        return surd(parts)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtScalar({k: -v for k, v in self._parts.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return complex(self) * other
            return NotImplemented
        parts: dict[int, Fraction] = {}
        for ka, va in self._parts.items():
            for kb, vb in o.items():
                key, c = _mul_keys(ka, kb)
                parts[key] = parts.get(key, ZERO) + c * va * vb
        return surd({k: v for k, v in parts.items() if v})

    __rmul__ = __mul__

    def conjugate(self, gen: int = -1):
        """Galois conjugate flipping ``sqrt(gen)``; ``gen=-1`` is complex conjugation."""
        if gen == -1:
            return surd({k: (-v if k < 0 else v) for k, v in self._parts.items()})
        return surd({k: (-v if abs(k) % gen == 0 else v) for k, v in self._parts.items()})

    def inverse(self):
        gens = sorted({g for k in self._parts for g in _generators(k)})
        g = gens[-1]
        other = self.conjugate(g)
        return other * inv(self * other)

    def __truediv__(self, other):
        if isinstance(other, (complex, float)):
            return complex(self) / other
        return self * inv(other)

    def __rtruediv__(self, other):
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison and conversion --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadExtScalar):
            return self._parts == other._parts
        if isinstance(other, (int, Fraction)):
            return False
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._parts.items())))
        return self._hash

    def __bool__(self):
        return bool(self._parts)

    def __complex__(self):
        z = 0j
        for k, v in self._parts.items():
            r = float(v) * math.sqrt(abs(k))
            z += complex(0, r) if k < 0 else complex(r, 0)
        return z

    @property
    def real(self):
        return surd({k: v for k, v in self._parts.items() if k > 0})

    @property
    def imag(self):
        return surd({-k: v for k, v in self._parts.items() if k < 0})

    def is_real(self) -> bool:
        return all(k > 0 for k in self._parts)

    def __repr__(self):
        return f"QuadExtScalar({format_scalar(self)})"


def surd(parts: dict[int, Fraction]):
    """Canonical constructor: rational results come back as Fraction."""
    parts = {k: v for k, v in parts.items() if v}
    if not parts:
        return ZERO
    if len(parts) == 1 and 1 in parts:
        return parts[1]
    return QuadExtScalar(parts)


I = surd({-1: ONE})


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadExtScalar))


def is_zero(x, tol: float = 0.0) -> bool:
    if is_exact(x):
        return not x
    return abs(x) <= tol


def to_complex(x) -> complex:
    return complex(x)


def conj(x):
    if isinstance(x, (int, Fraction)):
        return x
    if isinstance(x, QuadExtScalar):
        return x.conjugate()
    return x.conjugate()


def real_part(x):
    if isinstance(x, (int, Fraction)):
        return x
    if isinstance(x, QuadExtScalar):
        return x.real
    return complex(x).real


def imag_part(x):
    if isinstance(x, (int, Fraction)):
        return ZERO
    if isinstance(x, QuadExtScalar):
        return x.imag
    return complex(x).imag


def add(a, b):
    return a + b


def mul(a, b):
    return a * b


def inv(x):
    if isinstance(x, QuadExtScalar):
        return x.inverse()
    if isinstance(x, int):
        return Fraction(1, x)
    if isinstance(x, Fraction):
        return 1 / x
    return 1 / x


def div(a, b):
    return a * inv(b)


def sqrt_exact(x):
    """Principal square root if it lies in a multi-quadratic field, else None."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        if not x:
            return ZERO
        p, q = x.numerator, x.denominator
        k = p * q
        s, m = _square_free_split(abs(k))
        return surd({(-m if k < 0 else m): Fraction(s, q)})
    if isinstance(x, QuadExtScalar) and set(x._parts) <= {1, -1}:
        a, b = x.base, x._parts.get(-1, ZERO)
        modulus = sqrt_exact(a * a + b * b)
        if not isinstance(modulus, Fraction):
            return None
        alpha = sqrt_exact((modulus + a) / 2)
        beta = sqrt_exact((modulus - a) / 2)
        if b < 0:
            beta = -beta
        return alpha + I * beta
    return None


def sqrt_any(x):
    """Exact principal root when possible, otherwise a numeric principal root."""
    r = sqrt_exact(x) if is_exact(x) else None
    if r is None:
        return cmath.sqrt(complex(x))
    return r


def sort_key(x) -> tuple:
    z = complex(x)
    return (round(z.real, 12), round(z.imag, 12), repr(x))


def format_scalar(x) -> str:
    if isinstance(x, (int, Fraction)):
        return str(x)
    if isinstance(x, QuadExtScalar):
        pieces = []
        for k in sorted(x._parts, key=lambda k: (abs(k), -k)):
            v = x._parts[k]
            if k == 1:
                pieces.append(str(v))
                continue
            rad = "i" if k == -1 else (f"i*sqrt({-k})" if k < 0 else f"sqrt({k})")
            pieces.append(rad if v == 1 else (f"-{rad}" if v == -1 else f"{v}*{rad}"))
        return " + ".join(pieces).replace("+ -", "- ")
    if isinstance(x, float):
        return f"{x:.12g}"
    z = complex(x)
    return f"{z.real:.12g}{z.imag:+.12g}j"
