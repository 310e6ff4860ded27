"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A :class:`CycNum` stores an element of Q(zeta_N) as an integer vector over the
power basis ``1, z, ..., z^(phi(N)-1)`` together with one positive common
denominator.  The vector is always reduced modulo the N-th cyclotomic
polynomial, so equal elements at the same conductor have identical data.
Conductors congruent to 2 mod 4 never occur: Q(zeta_2m) = Q(zeta_m) for odd m.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

Scalar = Union[int, Fraction, "CycNum"]


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def _normal_conductor(n: int) -> int:
    return n // 2 if n % 4 == 2 else n


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly_divide_exact(num: list[int], den: list[int]) -> list[int]:
    """Quotient of integer polynomials (low degree first) when den is monic and divides num."""
    num = list(num)
    quotient = [0] * (len(num) - len(den) + 1)
    for shift in range(len(quotient) - 1, -1, -1):
        coeff = num[shift + len(den) - 1]
        quotient[shift] = coeff
        if coeff:
            for i, c in enumerate(den):
                num[shift + i] -= coeff * c
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return quotient


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first.

    Uses x^n - 1 = prod_{d | n} Phi_d, dividing out the proper divisors.
    """
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = _poly_divide_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row e is the reduced power-basis vector of x^e for 0 <= e < n."""
    deg = euler_phi(n)
    phi_poly = cyclotomic_polynomial(n)
    rows: list[tuple[int, ...]] = []
    current = [0] * deg
    current[0] = 1
    for _ in range(n):
        rows.append(tuple(current))
        # multiply by x and reduce using x^deg = -sum phi_poly[i] x^i
        top = current[-1]
        current = [0] + current[:-1]
        if top:
            for i in range(deg):
                current[i] -= top * phi_poly[i]
    return tuple(rows)


@lru_cache(maxsize=None)
def _inflation_matrix(small: int, big: int) -> tuple[tuple[int, ...], ...]:
    """Columns are images of the power basis of Q(zeta_small) inside Q(zeta_big)."""
    step = big // small
    table = _power_table(big)
    return tuple(table[j * step] for j in range(euler_phi(small)))


@lru_cache(maxsize=None)
def _deflation_solver(small: int, big: int) -> tuple[tuple[int, ...], tuple[tuple[Fraction, ...], ...]]:
    """Pivot rows and inverse of the square pivot block of the inflation matrix."""
    cols = _inflation_matrix(small, big)
    k = len(cols)
    rows = [[Fraction(cols[j][i]) for j in range(k)] for i in range(euler_phi(big))]
    pivots: list[int] = []
    echelon: list[tuple[int, list[Fraction]]] = []
    for i, row in enumerate(rows):
        vec = list(row)
        for col, brow in echelon:
            if vec[col]:
                factor = vec[col] / brow[col]
                vec = [a - factor * b for a, b in zip(vec, brow)]
        lead = next((c for c, v in enumerate(vec) if v), None)
        if lead is not None:
            echelon.append((lead, vec))
            pivots.append(i)
            if len(pivots) == k:
                break
    block = [rows[i] for i in pivots]
    inverse = _fraction_inverse(block)
    return tuple(pivots), tuple(tuple(r) for r in inverse)


def _fraction_inverse(matrix: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=None)
def _units(n: int) -> tuple[int, ...]:
    return tuple(k for k in range(1, n + 1) if math.gcd(k, n) == 1)


class CycNum:
    """Immutable element of Q(zeta_N)."""

    __slots__ = ("conductor", "_num", "_den", "_minimal")

    conductor: int
    _num: tuple[int, ...]
    _den: int

    def __init__(self, value: int | Fraction | CycNum = 0) -> None:
        if isinstance(value, CycNum):
            self.conductor, self._num, self._den = value.conductor, value._num, value._den
        else:
            frac = Fraction(value)
            self.conductor, self._num, self._den = 1, (frac.numerator,), frac.denominator
        self._minimal = None

    @classmethod
    def _raw(cls, conductor: int, num: tuple[int, ...], den: int) -> CycNum:
        obj = object.__new__(cls)
        obj.conductor = conductor
        obj._num = num
        obj._den = den
        obj._minimal = None
        return obj

    @classmethod
    def _make(cls, conductor: int, num: Sequence[int], den: int) -> CycNum:
        if den < 0:
            num, den = [-a for a in num], -den
        g = den
        for a in num:
            if a:
                g = math.gcd(g, a)
                if g == 1:
                    break
        if g != 1:
            num = [a // g for a in num]
            den //= g
        if conductor > 1 and not any(num[1:]):
            conductor, num = 1, [num[0]]
        if not num[0] and conductor == 1:
            den = 1
        return cls._raw(conductor, tuple(num), den)

    @classmethod
    def rational(cls, numerator: int, denominator: int = 1) -> CycNum:
        return cls._make(1, [numerator], denominator)

    @classmethod
    def from_coeffs(cls, conductor: int, coeffs: Mapping[int, int | Fraction]) -> CycNum:
        """Build sum_j coeffs[j] * zeta_conductor^j; exponents may be any integers."""
        total = ZERO
        for j, c in coeffs.items():
            if c:
                total = total + root_of_unity(conductor, j) * Fraction(c)
        return total

    # ---- basic queries -------------------------------------------------

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    def is_zero(self) -> bool:
        return self.conductor == 1 and self._num[0] == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return self.conductor == 1

    def to_fraction(self) -> Fraction:
        if self.conductor != 1:
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def coefficients(self) -> dict[int, Fraction]:
        """Nonzero power-basis coefficients at the minimal conductor."""
        m = self.minimal()
        return {j: Fraction(a, m._den) for j, a in enumerate(m._num) if a}

    # ---- conductor management -----------------------------------------

    def _lifted(self, conductor: int) -> list[int]:
        if conductor == self.conductor:
            return list(self._num)
        step = conductor // self.conductor
        table = _power_table(conductor)
        out = [0] * euler_phi(conductor)
        for j, a in enumerate(self._num):
            if a:
                row = table[j * step]
                for i, r in enumerate(row):
                    if r:
                        out[i] += a * r
        return out

    def inflate(self, conductor: int) -> CycNum:
        conductor = _normal_conductor(conductor)
        if conductor % self.conductor:
            raise ValueError(f"conductor {conductor} is not a multiple of {self.conductor}")
        return CycNum._raw(conductor, tuple(self._lifted(conductor)), self._den)

    def minimal(self) -> CycNum:
        """Same element written at its minimal conductor."""
        if self._minimal is not None:
            return self._minimal
        result = self
        n = self.conductor
        if n > 1:
            for m in _divisors(n)[:-1]:
                if m % 4 == 2:
                    continue
                if all(self.galois(k) == self for k in _units(n) if (k - 1) % m == 0 and k != 1):
                    pivots, inverse = _deflation_solver(m, n)
                    picked = [self._num[i] for i in pivots]
                    coords = [sum(inv * a for inv, a in zip(row, picked)) for row in inverse]
                    common = 1
                    for c in coords:
                        common = _lcm(common, c.denominator)
                    result = CycNum._make(m, [int(c * common) for c in coords], self._den * common)
                    break
        self._minimal = result
        return result

    # ---- arithmetic ----------------------------------------------------

    @staticmethod
    def _coerce(other: object) -> CycNum | None:
        if isinstance(other, CycNum):
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum(other)
        return None

    def __add__(self, other: Scalar) -> CycNum:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.conductor == 1 and o.conductor == 1:
            return CycNum._make(1, [self._num[0] * o._den + o._num[0] * self._den], self._den * o._den)
        n = _lcm(self.conductor, o.conductor)
        a, b = self._lifted(n), o._lifted(n)
        return CycNum._make(n, [x * o._den + y * self._den for x, y in zip(a, b)], self._den * o._den)

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return CycNum._raw(self.conductor, tuple(-a for a in self._num), self._den)

    def __sub__(self, other: Scalar) -> CycNum:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Scalar) -> CycNum:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Scalar) -> CycNum:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.conductor == 1:
            f = o._num[0]
            return CycNum._make(self.conductor, [a * f for a in self._num], self._den * o._den)
        if self.conductor == 1:
            f = self._num[0]
            return CycNum._make(o.conductor, [a * f for a in o._num], self._den * o._den)
        n = _lcm(self.conductor, o.conductor)
        a, b = self._lifted(n), o._lifted(n)
        acc = [0] * n
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        acc[(i + j) % n] += x * y
        deg = len(a)
        out = acc[:deg]
        table = _power_table(n)
        for e in range(deg, n):
            c = acc[e]
            if c:
                for i, r in enumerate(table[e]):
                    if r:
                        out[i] += c * r
        return CycNum._make(n, out, self._den * o._den)

    __rmul__ = __mul__

    def galois(self, k: int) -> CycNum:
        """Image under the automorphism zeta_N -> zeta_N^k (k coprime to N)."""
        n = self.conductor
        if n == 1:
            return self
        if math.gcd(k, n) != 1:
            raise ValueError(f"{k} is not a unit modulo {n}")
        table = _power_table(n)
        out = [0] * len(self._num)
        for j, a in enumerate(self._num):
            if a:
                for i, r in enumerate(table[(j * k) % n]):
                    if r:
                        out[i] += a * r
        return CycNum._raw(n, tuple(out), self._den)

    def conjugate(self) -> CycNum:
        return self.galois(-1)

    def norm(self) -> Fraction:
        m = self.minimal()
        prod = ONE
        for k in _units(m.conductor):
            prod = prod * m.galois(k)
        return prod.to_fraction()

    def inverse(self) -> CycNum:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.conductor == 1:
            return CycNum._make(1, [self._den], self._num[0])
        m = self.minimal()
        if m.conductor == 1:
            return m.inverse()
        cofactor = ONE
        for k in _units(m.conductor):
            if k != 1:
                cofactor = cofactor * m.galois(k)
        return cofactor * (1 / (m * cofactor).to_fraction())

    def __truediv__(self, other: Scalar) -> CycNum:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Scalar) -> CycNum:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int) -> CycNum:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # ---- comparison and hashing ---------------------------------------

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.conductor == o.conductor:
            return self._den == o._den and self._num == o._num
        n = _lcm(self.conductor, o.conductor)
        return self._den == o._den and self._lifted(n) == o._lifted(n)

    def __hash__(self) -> int:
        m = self.minimal()
        if m.conductor == 1:
            return hash(Fraction(m._num[0], m._den))
        return hash((m.conductor, m._num, m._den))

    # ---- roots of unity ------------------------------------------------

    def as_root_of_unity(self) -> tuple[int, int] | None:
        """Return (order, exponent) with self = zeta_order^exponent, or None."""
        m = self.minimal()
        base = 2 * m.conductor if m.conductor % 2 else m.conductor
        for k in range(base):
            if root_of_unity(base, k) == m:
                g = math.gcd(k, base)
                return base // g, k // g
        return None

    # ---- serialization -------------------------------------------------

    def to_json(self) -> dict:
        m = self.minimal()
        coeffs = {str(j): _fraction_str(Fraction(a, m._den)) for j, a in enumerate(m._num) if a}
        return {"conductor": m.conductor, "coeffs": coeffs}

    @classmethod
    def from_json(cls, data: Mapping) -> CycNum:
        n = int(data["conductor"])
        return cls.from_coeffs(n, {int(j): Fraction(v) for j, v in data["coeffs"].items()})

    def __str__(self) -> str:
        m = self.minimal()
        if m.is_zero():
            return "0"
        parts: list[str] = []
        for j, a in enumerate(m._num):
            if not a:
                continue
            c = Fraction(a, m._den)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if j == 0:
                body = _fraction_str(mag)
            else:
                power = f"z{m.conductor}" if j == 1 else f"z{m.conductor}^{j}"
                body = power if mag == 1 else f"{_fraction_str(mag)}*{power}"
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"CycNum({self})"


def _fraction_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


ZERO = CycNum._raw(1, (0,), 1)
ONE = CycNum._raw(1, (1,), 1)


@lru_cache(maxsize=4096)
def root_of_unity(n: int, k: int = 1) -> CycNum:
    """zeta_n^k with zeta_n = exp(2 pi i / n)."""
    if n < 1:
        raise ValueError("order must be positive")
    k %= n
    if n % 4 == 2:
        half = n // 2
        value = root_of_unity(half, k * ((half + 1) // 2))
        return -value if k % 2 else value
    table = _power_table(n)
    return CycNum._make(n, table[k], 1)


def as_cyc(value: Scalar) -> CycNum:
    return value if isinstance(value, CycNum) else CycNum(value)


def cyc_sum(values: Iterable[Scalar]) -> CycNum:
    """Sum many values with a single common denominator pass."""
    vals = [as_cyc(v) for v in values]
    if not vals:
        return ZERO
    n = 1
    for v in vals:
        n = _lcm(n, v.conductor)
    den = 1
    for v in vals:
        den = _lcm(den, v._den)
    acc = [0] * euler_phi(n)
    for v in vals:
        scale = den // v._den
        for i, a in enumerate(v._lifted(n)):
            if a:
                acc[i] += a * scale
    return CycNum._make(n, acc, den)


# ---- matrices ------------------------------------------------------------

CycRows = list[list[CycNum]]


def _to_poly_arrays(matrix: Sequence[Sequence[CycNum]], conductor: int) -> tuple[np.ndarray, int]:
    """Integer array of shape (phi, rows, cols) and common denominator."""
    rows, cols = len(matrix), len(matrix[0]) if matrix else 0
    den = 1
    for row in matrix:
        for v in row:
            den = _lcm(den, v._den)
    deg = euler_phi(conductor)
    data = [[[0] * cols for _ in range(rows)] for _ in range(deg)]
    for r, row in enumerate(matrix):
        for c, v in enumerate(row):
            if v.is_zero():
                continue
            scale = den // v._den
            for i, a in enumerate(v._lifted(conductor)):
                if a:
                    data[i][r][c] = a * scale
    biggest = max((abs(x) for plane in data for row in plane for x in row), default=0)
    dtype = np.int64 if biggest < 2**31 else object
    return np.array(data, dtype=dtype).reshape(deg, rows, cols), den


def cyc_matmul(a: Sequence[Sequence[CycNum]], b: Sequence[Sequence[CycNum]]) -> CycRows:
    """Exact matrix product using integer polynomial components."""
    if not a or not b:
        return []
    inner = len(b)
    if len(a[0]) != inner:
        raise ValueError("dimension mismatch")
    n = 1
    for mat in (a, b):
        for row in mat:
            for v in row:
                n = _lcm(n, v.conductor)
    pa, da = _to_poly_arrays(a, n)
    pb, db = _to_poly_arrays(b, n)
    deg = euler_phi(n)
    bound = int(np.abs(pa).max(initial=0)) * int(np.abs(pb).max(initial=0)) * inner * deg
    table = _power_table(n)
    max_table = max(abs(x) for row in table for x in row)
    if bound * max_table * n >= 2**62 or pa.dtype == object or pb.dtype == object:
        pa, pb = pa.astype(object), pb.astype(object)
    rows, cols = len(a), len(b[0])
    acc = [None] * n
    for i in range(deg):
        if not pa[i].any():
            continue
        for j in range(deg):
            if not pb[j].any():
                continue
            prod = pa[i] @ pb[j]
            e = (i + j) % n
            acc[e] = prod if acc[e] is None else acc[e] + prod
    out_planes = [np.zeros((rows, cols), dtype=pa.dtype) for _ in range(deg)]
    for e, plane in enumerate(acc):
        if plane is None:
            continue
        for t, r in enumerate(table[e]):
            if r:
                out_planes[t] = out_planes[t] + r * plane
    den = da * db
    result: CycRows = []
    for r in range(rows):
        result.append([CycNum._make(n, [int(out_planes[t][r, c]) for t in range(deg)], den) for c in range(cols)])
    return result


def conjugate_transpose(m: Sequence[Sequence[CycNum]]) -> CycRows:
    return [[m[r][c].conjugate() for r in range(len(m))] for c in range(len(m[0]))]


def is_identity(m: Sequence[Sequence[CycNum]]) -> bool:
    return all(v == (1 if r == c else 0) for r, row in enumerate(m) for c, v in enumerate(row))


def row_reduce(m: Sequence[Sequence[Scalar]]) -> tuple[CycRows, list[int]]:
    """Reduced row echelon form over Q(zeta) and the pivot columns."""
    rows = [[as_cyc(v) for v in row] for row in m]
    pivots: list[int] = []
    if not rows:
        return rows, pivots
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m: Sequence[Sequence[Scalar]]) -> int:
    return len(row_reduce(m)[1])


def determinant(m: Sequence[Sequence[Scalar]]) -> CycNum:
    rows = [[as_cyc(v) for v in row] for row in m]
    n = len(rows)
    det = ONE
    for col in range(n):
        pivot = next((i for i in range(col, n) if rows[i][col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        p = rows[col][col]
        det = det * p
        inv = p.inverse()
        for i in range(col + 1, n):
            if rows[i][col]:
                f = rows[i][col] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[col])]
    return det


def solve_scalar(lhs: Sequence[CycNum], rhs: Sequence[CycNum]) -> CycNum | None:
    """The unique c with lhs = c * rhs, or None when no such c exists or rhs vanishes."""
    pivot = next((i for i, v in enumerate(rhs) if v), None)
    if pivot is None:
        return None
    c = lhs[pivot] / rhs[pivot]
    if all(a == c * b for a, b in zip(lhs, rhs)):
        return c
    return None
