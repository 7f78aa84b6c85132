"""Classical homogeneous symbols and the exact term classes of the resolvent
recursion.

A ResolventTerm is numerator(x,xi) * (p_m(x,xi) - lambda)^{-k}; the recursion
and the residue assembly never leave this class (resp. PowerBasisTerm for the
complex-power side), which is what keeps the whole construction exact.
"""

from __future__ import annotations

import cmath
import json
import math
from fractions import Fraction

import numpy as np

from .poly import Poly, QQi, QQI_MINUS_I, SPoly, multi_abs

_TWO_PI = 2.0 * math.pi


class ClassicalSymbol:
    """Polynomial-coefficient classical symbol p = sum_j p_{m-j}.

    parts[j] must be xi-homogeneous of degree m - j (or zero); the leading
    part must be nonzero.
    """

    __slots__ = ("dim", "order", "parts")

    def __init__(self, dim: int, order: int, parts):
        parts = list(parts)
        if not parts or parts[0].is_zero():
            raise ValueError("leading part p_m must not vanish identically")
        for j, part in enumerate(parts):
            if part.dim != dim:
                raise ValueError("part dimension mismatch")
            if part.is_zero():
                continue
            deg = part.xi_degree()
            if deg is None or deg != order - j:
                raise ValueError(
                    f"part j={j} is not xi-homogeneous of degree {order - j}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "parts", tuple(parts))

    def __setattr__(self, name, value):
        raise AttributeError("ClassicalSymbol is immutable")

    @property
    def leading(self) -> Poly:
        return self.parts[0]

    def part(self, j: int) -> Poly:
        if 0 <= j < len(self.parts):
            return self.parts[j]
        return Poly.zero(self.dim)

    @property
    def depth(self) -> int:
        return len(self.parts) - 1

    def total(self) -> Poly:
        out = Poly.zero(self.dim)
        for p in self.parts:
            out = out + p
        return out

    def is_elliptic(self, box=1, n_x: int = 7, n_angle: int = 64) -> bool:
        """Positivity of p_m on sampled chart points x in [-box, box]^d, |xi|=1."""
        d = self.dim
        xs = np.linspace(-float(box), float(box), n_x)
        if d == 1:
            xis = [(1.0,), (-1.0,)]
        else:
            ts = np.linspace(0.0, _TWO_PI, n_angle, endpoint=False)
            xis = [(math.cos(t), math.sin(t)) for t in ts]
        grids = np.meshgrid(*([xs] * d))
        xpoints = np.stack([g.ravel() for g in grids], axis=-1)
        for x in xpoints:
            for xi in xis:
                v = self.leading.eval(tuple(x), xi)
                if not (v.real > 0 and abs(v.imag) < 1e-12 * max(1.0, abs(v.real))):
                    return False
        return True


class ResolventTerm:
    """One pole-order term a_{j,k}(x,xi) (p_m - lambda)^{-k} of depth j."""

    __slots__ = ("j", "k", "numerator")

    def __init__(self, j: int, k: int, numerator: Poly):
        if j < 0:
            raise ValueError("depth j must be >= 0")
        if k < 1:
            raise ValueError("pole order k must be >= 1")
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "numerator", numerator)

    def __setattr__(self, name, value):
        raise AttributeError("ResolventTerm is immutable")

    def __eq__(self, other):
        if not isinstance(other, ResolventTerm):
            return NotImplemented
        return (self.j, self.k, self.numerator) == (other.j, other.k, other.numerator)

    def __repr__(self):
        return f"[j={self.j}] ({self.numerator!r}) * (p-lam)^-{self.k}"

    def homogeneity_ok(self, order: int) -> bool:
        """deg_xi(numerator) - m*k == -m - j, with a xi-homogeneous numerator."""
        if self.numerator.is_zero():
            return True
        deg = self.numerator.xi_degree()
        if deg is None:
            return False
        return deg - order * self.k == -order - self.j

    def eval(self, x, xi, lam, base: Poly):
        pm = complex(base.eval(x, xi)) if not _is_exact(x, xi) else base.eval(x, xi)
        if _is_exact(x, xi) and isinstance(lam, (int, Fraction, QQi)):
            num = self.numerator.eval(x, xi)
            den = (QQi.coerce(pm) - QQi.coerce(lam)) ** self.k
            return num / den if isinstance(num, QQi) else QQi.coerce(num) / den
        num = complex(self.numerator.eval(x, xi))
        return num * (complex(pm) - complex(lam)) ** (-self.k)


def _is_exact(x, xi) -> bool:
    return all(isinstance(v, (int, Fraction, QQi)) for v in list(x) + list(xi))


def merge_terms(terms) -> list:
    """Canonical form: one term per (j, k), sorted, zero numerators dropped."""
    acc = {}
    dim = None
    for t in terms:
        dim = t.numerator.dim
        key = (t.j, t.k)
        if key in acc:
            acc[key] = acc[key] + t.numerator
        else:
            acc[key] = t.numerator
    out = []
    for (j, k) in sorted(acc):
        num = acc[(j, k)]
        if not num.is_zero():
            out.append(ResolventTerm(j, k, num))
    return out


def diff_xi_term(term: ResolventTerm, i: int, base: Poly) -> list:
    """d/dxi_i of numerator*(p_m-lambda)^{-k}; depth bookkeeping j -> j+1."""
    out = []
    dnum = term.numerator.diff_xi(i)
    if not dnum.is_zero():
        out.append(ResolventTerm(term.j + 1, term.k, dnum))
    dp = base.diff_xi(i)
    if not dp.is_zero():
        num = term.numerator * dp * QQi(-term.k)
        if not num.is_zero():
            out.append(ResolventTerm(term.j + 1, term.k + 1, num))
    return out


def diff_x_term(term: ResolventTerm, i: int, base: Poly) -> list:
    """D_{x_i} = -i d/dx_i of a term; the -i factors stay Gaussian-rational.

    x-derivatives do not move the depth j.
    """
    out = []
    dnum = term.numerator.diff_x(i)
    if not dnum.is_zero():
        out.append(ResolventTerm(term.j, term.k, dnum * QQI_MINUS_I))
    dp = base.diff_x(i)
    if not dp.is_zero():
        num = term.numerator * dp * (QQI_MINUS_I * QQi(-term.k))
        if not num.is_zero():
            out.append(ResolventTerm(term.j, term.k + 1, num))
    return out


def diff_xi(term: ResolventTerm, alpha, base: Poly) -> list:
    """Exact d_xi^alpha of a resolvent term, canonically merged."""
    terms = [term]
    for i, a in enumerate(alpha):
        for _ in range(a):
            nxt = []
            for t in terms:
                nxt.extend(diff_xi_term(t, i, base))
            terms = nxt
    return merge_terms(terms)


def diff_x(term: ResolventTerm, alpha, base: Poly) -> list:
    """Exact D_x^alpha of a resolvent term, canonically merged."""
    terms = [term]
    for i, a in enumerate(alpha):
        for _ in range(a):
            nxt = []
            for t in terms:
                nxt.extend(diff_x_term(t, i, base))
            terms = nxt
    return merge_terms(terms)


class ResolventExpansion:
    """Graded family {q_{-m-j}}_j of pole-order terms over a fixed base p_m."""

    __slots__ = ("base", "order", "terms")

    def __init__(self, base: Poly, order: int, terms):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "terms", tuple(tuple(ts) for ts in terms))

    def __setattr__(self, name, value):
        raise AttributeError("ResolventExpansion is immutable")

    @property
    def depth(self) -> int:
        return len(self.terms) - 1

    def depth_terms(self, j: int):
        return self.terms[j]

    def eval_depth(self, j: int, x, xi, lam) -> complex:
        return sum((complex(t.eval(x, xi, lam, self.base)) for t in self.terms[j]),
                   start=0.0 + 0.0j)

    def homogeneity_ok(self) -> bool:
        return all(t.homogeneity_ok(self.order)
                   for ts in self.terms for t in ts)


class PowerBasisTerm:
    """scalar(s) * numerator(x,xi) * p_m(x,xi)^(a*s + b), exact bookkeeping."""

    __slots__ = ("numerator", "a", "b", "scalar")

    def __init__(self, numerator: Poly, a, b, scalar: SPoly):
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "scalar", scalar)

    def __setattr__(self, name, value):
        raise AttributeError("PowerBasisTerm is immutable")

    def exponent_at(self, s):
        if isinstance(s, (int, Fraction)):
            return self.a * Fraction(s) + self.b
        return complex(self.a) * complex(s) + complex(self.b)

    def eval(self, x, xi, s, base: Poly) -> complex:
        pm = complex(base.eval(x, xi))
        if pm.imag != 0 or pm.real <= 0:
            raise ValueError("base p_m must be positive at the evaluation point")
        e = complex(self.a) * complex(s) + complex(self.b)
        val = complex(self.scalar.eval(s)) * complex(self.numerator.eval(x, xi))
        return val * cmath.exp(e * math.log(pm.real))

    def __repr__(self):
        return f"({self.scalar!r})*({self.numerator!r})*p^({self.a}s{self.b:+})"


class Sector:
    """Open angular sector theta < arg(lambda) < theta' with arg in (0, 2pi)."""

    __slots__ = ("theta", "theta_prime")

    def __init__(self, theta: float, theta_prime: float):
        if not (0.0 < theta < math.pi < theta_prime < _TWO_PI):
            raise ValueError("sector must satisfy 0 < theta < pi < theta' < 2*pi")
        object.__setattr__(self, "theta", float(theta))
        object.__setattr__(self, "theta_prime", float(theta_prime))

    def __setattr__(self, name, value):
        raise AttributeError("Sector is immutable")

    def contains(self, lam: complex) -> bool:
        lam = complex(lam)
        if lam == 0:
            return False
        arg = cmath.phase(lam)
        if arg <= 0.0:
            arg += _TWO_PI
        return self.theta < arg < self.theta_prime


class ConicRegion:
    """Union of R^d x sector and {|lambda| < rho |xi|^m}; conic under
    (xi, lambda) -> (t xi, t^m lambda)."""

    __slots__ = ("sector", "rho", "order")

    def __init__(self, sector: Sector, rho, order: int):
        rho = Fraction(rho)
        if rho <= 0:
            raise ValueError("rho must be positive")
        object.__setattr__(self, "sector", sector)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("ConicRegion is immutable")

    def membership(self, xi, lam: complex) -> bool:
        xi = np.asarray(xi, dtype=float)
        lam = complex(lam)
        if lam == 0 and not np.any(xi):
            raise ValueError("(xi, lambda) = (0, 0) is outside the conic set")
        if self.sector.contains(lam):
            return True
        norm = float(np.linalg.norm(xi))
        return abs(lam) < float(self.rho) * norm ** self.order


class Contour:
    """Keyhole contour: ray in at arg +pi, clockwise circle of radius r, ray
    out at arg -pi.  N Gauss-Legendre nodes per segment."""

    __slots__ = ("r", "n_nodes", "r_max")

    def __init__(self, r: float, n_nodes: int = 256, r_max: float | None = None):
        if r <= 0:
            raise ValueError("contour radius must be positive")
        if n_nodes < 64:
            raise ValueError("node count per segment must be >= 64")
        object.__setattr__(self, "r", float(r))
        object.__setattr__(self, "n_nodes", int(n_nodes))
        object.__setattr__(self, "r_max", float(r_max) if r_max else 1e3 * float(r))

    def __setattr__(self, name, value):
        raise AttributeError("Contour is immutable")

    def nodes(self):
        """(lam, weight, log_lam) arrays; sum f(lam)*weight approximates the
        contour integral, with log_lam the branch arg(lam) in [-pi, pi]."""
        n = self.n_nodes
        u_nodes, u_w = np.polynomial.legendre.leggauss(n)
        big_u = math.log(self.r_max / self.r)
        u = 0.5 * big_u * (u_nodes + 1.0)
        uw = 0.5 * big_u * u_w

        # incoming ray, arg = +pi, from r_max down to r
        log_in = math.log(self.r) + u + 1j * math.pi
        lam_in = np.exp(log_in)
        w_in = uw * self.r * np.exp(u)          # -e^{i pi} = +1

        # clockwise circle from +pi to -pi
        t_nodes, t_w = np.polynomial.legendre.leggauss(n)
        t = math.pi * t_nodes
        tw = math.pi * t_w
        log_c = math.log(self.r) + 1j * t
        lam_c = np.exp(log_c)
        w_c = -1j * self.r * np.exp(1j * t) * tw

        # outgoing ray, arg = -pi, from r up to r_max
        log_out = math.log(self.r) + u - 1j * math.pi
        lam_out = np.exp(log_out)
        w_out = -uw * self.r * np.exp(u)

        lam = np.concatenate([lam_in, lam_c, lam_out])
        weight = np.concatenate([w_in, w_c, w_out])
        log_lam = np.concatenate([log_in, log_c, log_out])
        return lam, weight, log_lam


def contour_nodes(c: Contour):
    """Quadrature nodes as (lambda, weight) pairs tracing the keyhole."""
    lam, weight, _ = c.nodes()
    return list(zip(lam.tolist(), weight.tolist()))


def region_membership(region: ConicRegion, xi, lam) -> bool:
    return region.membership(xi, lam)


# ---------------------------------------------------------------------------
# JSON serialization of classical symbols

def _coef_to_strings(c: QQi):
    return [str(c.re.numerator), str(c.re.denominator),
            str(c.im.numerator), str(c.im.denominator)]


def _coef_from_strings(raw) -> QQi:
    if len(raw) != 4:
        raise ValueError("coefficient must be four decimal strings")
    return QQi(Fraction(int(raw[0]), int(raw[1])),
               Fraction(int(raw[2]), int(raw[3])))


def symbol_to_json(sym: ClassicalSymbol) -> dict:
    parts = []
    for j, part in enumerate(sym.parts):
        monos = [{"exp": list(exp), "coef": _coef_to_strings(coef)}
                 for exp, coef in sorted(part.terms.items())]
        parts.append({"degree": sym.order - j, "monomials": monos})
    return {"vars": sym.dim, "order": sym.order, "parts": parts}


def symbol_from_json(doc: dict) -> ClassicalSymbol:
    try:
        d = int(doc["vars"])
        m = int(doc["order"])
        raw_parts = doc["parts"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed symbol document: {exc}") from exc
    by_degree = {}
    for entry in raw_parts:
        deg = int(entry["degree"])
        terms = {}
        for mono in entry["monomials"]:
            exp = tuple(int(e) for e in mono["exp"])
            terms[exp] = _coef_from_strings(mono["coef"])
        by_degree[deg] = Poly(d, terms)
    depth = m - min(by_degree) if by_degree else 0
    parts = [by_degree.get(m - j, Poly.zero(d)) for j in range(depth + 1)]
    return ClassicalSymbol(d, m, parts)


def load_symbol(path) -> ClassicalSymbol:
    with open(path) as fh:
        return symbol_from_json(json.load(fh))


def dump_symbol(sym: ClassicalSymbol, path) -> None:
    with open(path, "w") as fh:
        json.dump(symbol_to_json(sym), fh, indent=1, sort_keys=True)
        fh.write("\n")
