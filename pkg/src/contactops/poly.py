"""Exact rational arithmetic: Gaussian rationals and multivariate polynomials.

Everything here is immutable after construction and safe to share across
threads.  Coefficients are Gaussian rationals (QQi) so the -i factors coming
from D_x = -i d/dx stay exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot coerce {type(v).__name__} to an exact rational")


class QQi:
    """Gaussian rational a + b*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("QQi is immutable")

    @staticmethod
    def coerce(v) -> "QQi":
        if isinstance(v, QQi):
            return v
        if isinstance(v, (int, Fraction)):
            return QQi(v)
        raise TypeError(f"cannot coerce {type(v).__name__} to QQi")

    def __add__(self, other):
        other = QQi.coerce(other)
        return QQi(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-QQi.coerce(other))

    def __rsub__(self, other):
        return QQi.coerce(other) + (-self)

    def __mul__(self, other):
        other = QQi.coerce(other)
        return QQi(self.re * other.re - self.im * other.im,
                   self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = QQi.coerce(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QQi((self.re * other.re + self.im * other.im) / n,
                   (self.im * other.re - self.re * other.im) / n)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("QQi powers must be non-negative integers")
        out = QQi(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            other = QQi.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self):
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i)"


QQI_ZERO = QQi(0)
QQI_ONE = QQi(1)
QQI_I = QQi(0, 1)
QQI_MINUS_I = QQi(0, -1)


# ---------------------------------------------------------------------------
# multi-indices

def multi_abs(alpha) -> int:
    return sum(alpha)


def multi_factorial(alpha) -> int:
    out = 1
    for a in alpha:
        out *= factorial(a)
    return out


def multi_indices(d: int, total: int):
    """All length-d multi-indices with |alpha| == total."""
    if d == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in multi_indices(d - 1, total - first):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# polynomials in x_1..x_d, xi_1..xi_d

class Poly:
    """Exact polynomial in chart variables x and covariables xi.

    Monomials are stored as exponent tuples of length 2d (x exponents first,
    then xi exponents) mapping to QQi coefficients.  Zero coefficients are
    never stored, so the zero polynomial has empty support.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms=None):
        object.__setattr__(self, "dim", dim)
        clean = {}
        if terms:
            for exp, coef in terms.items():
                coef = QQi.coerce(coef)
                if len(exp) != 2 * dim:
                    raise ValueError(
                        f"exponent tuple {exp} does not match chart dimension {dim}")
                if not coef.is_zero():
                    clean[tuple(exp)] = coef
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors
    @staticmethod
    def zero(dim: int) -> "Poly":
        return Poly(dim, {})

    @staticmethod
    def const(dim: int, c) -> "Poly":
        return Poly(dim, {tuple([0] * (2 * dim)): QQi.coerce(c)})

    @staticmethod
    def x_var(dim: int, i: int) -> "Poly":
        exp = [0] * (2 * dim)
        exp[i] = 1
        return Poly(dim, {tuple(exp): QQI_ONE})

    @staticmethod
    def xi_var(dim: int, i: int) -> "Poly":
        exp = [0] * (2 * dim)
        exp[dim + i] = 1
        return Poly(dim, {tuple(exp): QQI_ONE})

    # -- ring operations
    def _check(self, other: "Poly"):
        if self.dim != other.dim:
            raise ValueError(
                f"chart dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, QQi)):
            other = Poly.const(self.dim, other)
        self._check(other)
        out = dict(self.terms)
        for exp, coef in other.terms.items():
            s = out.get(exp, QQI_ZERO) + coef
            if s.is_zero():
                out.pop(exp, None)
            else:
                out[exp] = s
        return Poly(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, QQi)):
            other = Poly.const(self.dim, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QQi)):
            c = QQi.coerce(other)
            if c.is_zero():
                return Poly.zero(self.dim)
            return Poly(self.dim, {e: k * c for e, k in self.terms.items()})
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, QQI_ZERO) + c1 * c2
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return Poly(self.dim, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("Poly powers must be non-negative integers")
        out = Poly.const(self.dim, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    # -- calculus
    def diff_x(self, i: int) -> "Poly":
        out = {}
        for exp, coef in self.terms.items():
            k = exp[i]
            if k == 0:
                continue
            e = list(exp)
            e[i] = k - 1
            out[tuple(e)] = coef * k
        return Poly(self.dim, out)

    def diff_xi(self, i: int) -> "Poly":
        out = {}
        for exp, coef in self.terms.items():
            k = exp[self.dim + i]
            if k == 0:
                continue
            e = list(exp)
            e[self.dim + i] = k - 1
            out[tuple(e)] = coef * k
        return Poly(self.dim, out)

    def diff_x_multi(self, alpha) -> "Poly":
        out = self
        for i, a in enumerate(alpha):
            for _ in range(a):
                out = out.diff_x(i)
        return out

    def diff_xi_multi(self, alpha) -> "Poly":
        out = self
        for i, a in enumerate(alpha):
            for _ in range(a):
                out = out.diff_xi(i)
        return out

    # -- queries
    def xi_degree(self):
        """Common xi-homogeneity degree of all monomials, None if mixed."""
        degs = {sum(e[self.dim:]) for e in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            return None
        return degs.pop()

    def max_xi_degree(self) -> int:
        return max((sum(e[self.dim:]) for e in self.terms), default=0)

    def max_x_degree(self) -> int:
        return max((sum(e[:self.dim]) for e in self.terms), default=0)

    def depends_on_x(self) -> bool:
        return any(sum(e[:self.dim]) > 0 for e in self.terms)

    # -- evaluation
    def eval(self, x, xi):
        """Evaluate at x, xi (sequences of length dim).

        Exact when all inputs are int/Fraction/QQi; otherwise evaluated in
        complex floating point monomial by monomial.
        """
        if len(x) != self.dim or len(xi) != self.dim:
            raise ValueError("evaluation point does not match chart dimension")
        vals = list(x) + list(xi)
        exact = all(isinstance(v, (int, Fraction, QQi)) for v in vals)
        if exact:
            total = QQI_ZERO
            for exp, coef in self.terms.items():
                term = coef
                for v, k in zip(vals, exp):
                    if k:
                        term = term * (QQi.coerce(v) ** k)
                total = total + term
            return total
        total = 0j
        for exp, coef in self.terms.items():
            term = complex(coef)
            for v, k in zip(vals, exp):
                if k:
                    term *= complex(v) ** k
            total += term
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        names = [f"x{i+1}" for i in range(self.dim)] + [f"xi{i+1}" for i in range(self.dim)]
        bits = []
        for exp in sorted(self.terms):
            coef = self.terms[exp]
            mono = "*".join(
                f"{n}^{k}" if k > 1 else n for n, k in zip(names, exp) if k)
            bits.append(f"{coef!r}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


class SPoly:
    """Polynomial in the formal power parameter s with QQi coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        if coeffs:
            for k, c in coeffs.items():
                c = QQi.coerce(c)
                if not c.is_zero():
                    clean[int(k)] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SPoly is immutable")

    @staticmethod
    def const(c) -> "SPoly":
        return SPoly({0: QQi.coerce(c)})

    @staticmethod
    def s() -> "SPoly":
        return SPoly({1: QQI_ONE})

    def __add__(self, other):
        if isinstance(other, (int, Fraction, QQi)):
            other = SPoly.const(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k, QQI_ZERO) + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return SPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return SPoly({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, QQi)):
            other = SPoly.const(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QQi)):
            c = QQi.coerce(other)
            return SPoly({k: v * c for k, v in self.coeffs.items()})
        out = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                s = out.get(k, QQI_ZERO) + c1 * c2
                if s.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = s
        return SPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def eval(self, s):
        """Exact for int/Fraction/QQi arguments, complex otherwise."""
        if isinstance(s, (int, Fraction, QQi)):
            s = QQi.coerce(s)
            total = QQI_ZERO
            for k, c in self.coeffs.items():
                total = total + c * (s ** k)
            return total
        total = 0j
        for k, c in self.coeffs.items():
            total += complex(c) * complex(s) ** k
        return total

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c!r}*s^{k}" if k else f"{c!r}"
                          for k, c in sorted(self.coeffs.items()))


def falling_binomial(k: int) -> SPoly:
    """binom(s, k-1) = s(s-1)...(s-k+2)/(k-1)! as an exact polynomial in s."""
    if k < 1:
        raise ValueError("pole order k must be >= 1")
    out = SPoly.const(1)
    s = SPoly.s()
    for j in range(k - 1):
        out = out * (s - j)
    return out * QQi(Fraction(1, factorial(k - 1)))
