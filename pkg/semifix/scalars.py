"""
Exact scalars for the two ground regimes

Number-field regime: elements of Q(zeta_M), stored as rational coefficient
vectors reduced modulo the M-th cyclotomic polynomial. Arithmetic runs on
sympy's dense univariate kernels over QQ.

Loop regime: monomials u * tau^v with u a root of unity and v rational,
modelling the units of C((tau)) and of its finite extensions.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import Poly, Symbol, ZZ, divisors, totient
from sympy.polys.densearith import dup_add, dup_mul, dup_neg, dup_rem, dup_sub
from sympy.polys.densebasic import dup_strip
from sympy.polys.domains import QQ
from sympy.polys.euclidtools import dup_invert

from semifix.errors import InsufficientCyclotomicOrder

logger = logging.getLogger(__name__)

RationalLike = Union[int, Fraction]


# --- Rationals ---

def to_qq(value) -> "QQ.dtype":
    """Convert an int, Fraction, "p/q" string or QQ element to QQ"""
    if isinstance(value, str):
        value = Fraction(value.strip())
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    return QQ.convert(value)


def qq_to_fraction(value) -> Fraction:
    return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))


def format_rational(value) -> str:
    """Serialize a rational as "p/q" (or "p" when integral)"""
    frac = value if isinstance(value, Fraction) else qq_to_fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}/{frac.denominator}"


@lru_cache(maxsize=None)
def euler_phi(order: int) -> int:
    return int(totient(order))


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# --- Cyclotomic polynomials ---

@lru_cache(maxsize=None)
def cyclotomic_polynomial(order: int) -> Tuple[int, ...]:
    """
    Coefficients of the order-th cyclotomic polynomial, lowest degree first.

    Computed by exact division of x^M - 1 by Phi_d for every proper divisor d.

    Args:
        order: Positive integer M

    Returns:
        Tuple of integer coefficients (c_0, ..., c_phi(M))

    Raises:
        ValueError: If order < 1
    """
    if order < 1:
        raise ValueError(f"Cyclotomic order must be positive, got {order}")

    x = Symbol("x")
    poly = Poly(x**order - 1, x, domain=ZZ)
    for d in divisors(order)[:-1]:
        factor = Poly(list(reversed(cyclotomic_polynomial(d))), x, domain=ZZ)
        poly = poly.exquo(factor)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def _modulus(order: int) -> Tuple:
    return tuple(QQ(c) for c in reversed(cyclotomic_polynomial(order)))


# --- Cyclotomic numbers ---

@dataclass(frozen=True)
class CyclotomicNumber:
    """
    Element of Q(zeta_M).

    coeffs holds the rational coefficients of 1, zeta, ..., zeta^(phi(M)-1).
    Equality is coefficientwise.
    """
    order: int
    coeffs: Tuple

    def __post_init__(self):
        expected = euler_phi(self.order)
        if len(self.coeffs) != expected:
            raise ValueError(
                f"Q(zeta_{self.order}) needs {expected} coefficients, got {len(self.coeffs)}"
            )

    # --- constructors ---

    @classmethod
    def from_rationals(cls, order: int, values: Sequence) -> "CyclotomicNumber":
        """Element with the given coefficient vector (padded or reduced as needed)"""
        dense = [to_qq(v) for v in values]
        return cls._from_dup(order, dup_strip(list(reversed(dense))))

    @classmethod
    def from_exponents(cls, order: int, terms: Dict[int, RationalLike]) -> "CyclotomicNumber":
        """Sum of coefficient * zeta^exponent for exponents taken mod M"""
        dense = [QQ(0)] * order
        for exponent, coefficient in terms.items():
            dense[exponent % order] += to_qq(coefficient)
        return cls._from_dup(order, dup_strip(list(reversed(dense))))

    @classmethod
    def rational(cls, order: int, value: RationalLike) -> "CyclotomicNumber":
        return cls.from_rationals(order, [value])

    @classmethod
    def zero(cls, order: int) -> "CyclotomicNumber":
        return cls(order, tuple(QQ(0) for _ in range(euler_phi(order))))

    @classmethod
    def one(cls, order: int) -> "CyclotomicNumber":
        return cls.rational(order, 1)

    @classmethod
    def zeta(cls, order: int, exponent: int = 1) -> "CyclotomicNumber":
        return cls.from_exponents(order, {exponent: 1})

    @classmethod
    def _from_dup(cls, order: int, poly: List) -> "CyclotomicNumber":
        reduced = dup_rem(poly, list(_modulus(order)), QQ) if poly else []
        coeffs = list(reversed(reduced))
        coeffs += [QQ(0)] * (euler_phi(order) - len(coeffs))
        return cls(order, tuple(coeffs))

    def _to_dup(self) -> List:
        return dup_strip(list(reversed(self.coeffs)))

    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.order != self.order:
                raise ValueError(
                    f"Cannot combine Q(zeta_{self.order}) with Q(zeta_{other.order})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.rational(self.order, other)
        return NotImplemented

    # --- arithmetic ---

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicNumber._from_dup(self.order, dup_add(self._to_dup(), other._to_dup(), QQ))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicNumber._from_dup(self.order, dup_sub(self._to_dup(), other._to_dup(), QQ))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CyclotomicNumber._from_dup(self.order, dup_neg(self._to_dup(), QQ))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicNumber._from_dup(self.order, dup_mul(self._to_dup(), other._to_dup(), QQ))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        """
        Multiplicative inverse.

        Raises:
            ZeroDivisionError: If self is zero
        """
        if self.is_zero():
            raise ZeroDivisionError(f"Inverse of zero in Q(zeta_{self.order})")
        inv = dup_invert(self._to_dup(), list(_modulus(self.order)), QQ)
        return CyclotomicNumber._from_dup(self.order, inv)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int) -> "CyclotomicNumber":
        base = self if exponent >= 0 else self.inverse()
        result = CyclotomicNumber.one(self.order)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def galois(self, a: int) -> "CyclotomicNumber":
        """Image under the automorphism zeta -> zeta^a (a coprime to M)"""
        if gcd(a, self.order) != 1:
            raise ValueError(f"zeta -> zeta^{a} is not an automorphism of Q(zeta_{self.order})")
        return self._galois(a)

    def _galois(self, a: int) -> "CyclotomicNumber":
        dense = [QQ(0)] * self.order
        for j, c in enumerate(self.coeffs):
            dense[(j * a) % self.order] += c
        return CyclotomicNumber._from_dup(self.order, dup_strip(list(reversed(dense))))

    def conj(self) -> "CyclotomicNumber":
        """Complex conjugation zeta -> zeta^(-1)"""
        return self._galois(-1)

    # --- predicates and views ---

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Optional[Fraction]:
        if all(c == 0 for c in self.coeffs[1:]):
            return qq_to_fraction(self.coeffs[0])
        return None

    def coordinates(self) -> List:
        return list(self.coeffs)

    def to_strings(self) -> List[str]:
        return [format_rational(c) for c in self.coeffs]

    def __str__(self) -> str:
        exponent = root_of_unity_exponent(self)
        if exponent is not None:
            return f"zeta({format_rational(exponent)})"
        return f"cyclo{self.order}[{', '.join(self.to_strings())}]"


# --- Roots of unity in Q(zeta_M) ---

def unit_group_order(order: int) -> int:
    """Order of the group of roots of unity in Q(zeta_M)"""
    return lcm(2, order)


def minimal_cyclotomic_order(denominator: int) -> int:
    """Smallest M with a primitive denominator-th root of unity in Q(zeta_M)"""
    return denominator // 2 if denominator % 4 == 2 else denominator


def root_of_unity(order: int, exponent: RationalLike) -> CyclotomicNumber:
    """
    The root of unity e^(2 pi i * exponent) as an element of Q(zeta_M).

    Raises:
        InsufficientCyclotomicOrder: If it does not lie in Q(zeta_M)
    """
    e = Fraction(exponent) % 1
    denom = e.denominator
    if order % denom == 0:
        return CyclotomicNumber.zeta(order, e.numerator * (order // denom))
    if order % 2 == 1 and (2 * order) % denom == 0:
        # primitive 2M-th roots in Q(zeta_M) for odd M: -zeta_M^((a - M)/2)
        a = e.numerator * (2 * order // denom)
        return -CyclotomicNumber.zeta(order, ((a - order) // 2) % order)
    raise InsufficientCyclotomicOrder(
        f"root of unity zeta({format_rational(e)}) is not in Q(zeta_{order})",
        minimal_order=lcm(order, minimal_cyclotomic_order(denom)),
    )


@lru_cache(maxsize=None)
def _roots_of_unity_table(order: int) -> Dict[Tuple, Fraction]:
    w = unit_group_order(order)
    table = {}
    for j in range(w):
        exponent = Fraction(j, w)
        table[root_of_unity(order, exponent).coeffs] = exponent
    return table


def root_of_unity_exponent(x: CyclotomicNumber) -> Optional[Fraction]:
    """Exponent e in [0, 1) with x = e^(2 pi i e), or None if x is not a root of unity"""
    return _roots_of_unity_table(x.order).get(x.coeffs)


# --- Loop regime: roots of unity and monomials ---

@dataclass(frozen=True, order=True)
class RootOfUnityExp:
    """The root of unity e^(2 pi i * value), value in [0, 1)"""
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value) % 1)

    def __mul__(self, other: "RootOfUnityExp") -> "RootOfUnityExp":
        return RootOfUnityExp(self.value + other.value)

    def inverse(self) -> "RootOfUnityExp":
        return RootOfUnityExp(-self.value)

    def __pow__(self, exponent: int) -> "RootOfUnityExp":
        return RootOfUnityExp(self.value * exponent)

    def order(self) -> int:
        return self.value.denominator

    def __str__(self) -> str:
        return f"zeta({format_rational(self.value)})"


@dataclass(frozen=True)
class LoopMonomial:
    """
    Monomial coeff * tau^val in the loop field model.

    val is integral for elements of k = C((tau)) and may be fractional for
    roots living in ramified extensions. Zero is not representable.
    """
    coeff: RootOfUnityExp
    val: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.coeff, RootOfUnityExp):
            object.__setattr__(self, "coeff", RootOfUnityExp(Fraction(self.coeff)))
        object.__setattr__(self, "val", Fraction(self.val))

    @classmethod
    def of(cls, coeff: RationalLike = 0, val: RationalLike = 0) -> "LoopMonomial":
        return cls(RootOfUnityExp(Fraction(coeff)), Fraction(val))

    @classmethod
    def one(cls) -> "LoopMonomial":
        return cls.of(0, 0)

    def __mul__(self, other: "LoopMonomial") -> "LoopMonomial":
        return LoopMonomial(self.coeff * other.coeff, self.val + other.val)

    def inverse(self) -> "LoopMonomial":
        return LoopMonomial(self.coeff.inverse(), -self.val)

    def __truediv__(self, other: "LoopMonomial") -> "LoopMonomial":
        return self * other.inverse()

    def __neg__(self) -> "LoopMonomial":
        return LoopMonomial(RootOfUnityExp(self.coeff.value + Fraction(1, 2)), self.val)

    def __pow__(self, exponent: int) -> "LoopMonomial":
        return LoopMonomial(self.coeff ** exponent, self.val * exponent)

    def scale_coeff(self, shift: Fraction) -> "LoopMonomial":
        """Multiply by the root of unity e^(2 pi i * shift)"""
        return LoopMonomial(RootOfUnityExp(self.coeff.value + shift), self.val)

    def is_one(self) -> bool:
        return self.coeff.value == 0 and self.val == 0

    def is_integral(self) -> bool:
        return self.val.denominator == 1

    def sort_key(self) -> Tuple[Fraction, Fraction]:
        return (self.val, self.coeff.value)

    def __str__(self) -> str:
        return f"{self.coeff}*tau^({format_rational(self.val)})"


def monomial_roots(x: LoopMonomial, r: int) -> List[LoopMonomial]:
    """
    All r-th roots of a monomial, ordered by j in coeff (a + j)/r.

    Raises:
        ValueError: If r < 1
    """
    if r < 1:
        raise ValueError(f"Root degree must be positive, got {r}")
    return [
        LoopMonomial(RootOfUnityExp((x.coeff.value + j) / r), x.val / r)
        for j in range(r)
    ]


def norm_F_over_k(x: LoopMonomial, n: int) -> LoopMonomial:
    """
    Norm from F = C((t)) to k = C((tau)), tau = t^n, for a unit x = u * t^s.

    The result u^n * zeta_n^(s n (n-1)/2) * tau^s is the product of the
    conjugates under t -> zeta_n t. Here val is measured in t-units.

    Raises:
        ValueError: If x has non-integral t-valuation
    """
    if not x.is_integral():
        raise ValueError(f"F-element {x} must have integral t-valuation")
    s = x.val
    shift = s * Fraction(n - 1, 2)
    return LoopMonomial(RootOfUnityExp(x.coeff.value * n + shift), s)
