"""Exact arithmetic over towers of algebraic number fields.

A :class:`Tower` is a chain ``Q = K0 < K1 < ... < Kh`` where each ``Ki`` is
obtained from ``K(i-1)`` by adjoining a root ``gi`` of a monic irreducible
polynomial.  Internally every level is also presented by a primitive element
so that sympy's algebraic-field arithmetic (and its factorisation routines)
can be used; the generator presentation is what users see.

Towers are immutable.  Adjoining a root produces a new tower whose ancestors
are the old one, and values from an ancestor are lifted automatically when
they meet values from a descendant.  Values from towers where neither
extends the other cannot be mixed.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import Poly, QQ, Symbol
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import ring as sympy_ring

from .config import LIMITS
from .errors import DegreeCapError, TowerLimitError, TowerMismatchError

NEG_INF = float("-inf")
POS_INF = float("inf")

_W = Symbol("w")


def qq(value):
    """Convert an int, Fraction or sympy rational into a ``QQ`` element."""
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    return QQ.convert(value)


def qq_to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _elem_key(dom, value) -> tuple:
    if dom is QQ:
        return ((int(value.numerator), int(value.denominator)),)
    return tuple((int(c.numerator), int(c.denominator)) for c in value.to_list())


class Tower:
    """An immutable tower of simple algebraic extensions of Q."""

    def __init__(self, parent, name, minpoly, dom, gens, parent_theta):
        self.parent = parent
        self.name = name
        self.minpoly = minpoly
        self.dom = dom
        self.gens = gens
        self.parent_theta = parent_theta
        if parent is None:
            self.height, self.names, self.key = 0, (), ()
            self.degree = 1
        else:
            self.height = parent.height + 1
            self.names = parent.names + (name,)
            mkey = tuple(_elem_key(parent.dom, c) for c in minpoly)
            self.key = parent.key + ((name, mkey),)
            self.degree = len(dom.mod.to_list()) - 1
        self._hash = hash(self.key)

    # -- identity -----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Tower) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.names:
            return "Tower(Q)"
        return f"Tower(Q({', '.join(self.names)}))"

    @property
    def is_rational(self) -> bool:
        return self.parent is None

    def chain(self) -> list["Tower"]:
        """This tower and all its ancestors, from Q upwards."""
        out, t = [], self
        while t is not None:
            out.append(t)
            t = t.parent
        return out[::-1]

    def extends(self, other: "Tower") -> bool:
        t = self
        while t is not None:
            if t == other:
                return True
            if t.height <= other.height:
                return False
            t = t.parent
        return False

    def describe(self) -> list[str]:
        """Human readable defining relations, one per generator."""
        lines = []
        for level in self.chain()[1:]:
            parent = level.parent
            coeffs = [AlgebraicNumber(parent, c) for c in level.minpoly]
            poly = UniPoly.from_coeffs(coeffs, parent)
            lines.append(f"{poly.format(level.name)} = 0")
        return lines

    # -- elements -----------------------------------------------------------
    def number(self, value) -> "AlgebraicNumber":
        if isinstance(value, AlgebraicNumber):
            return value.lift(self)
        return AlgebraicNumber(self, self.dom.convert(qq(value)))

    @property
    def zero(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, self.dom.zero)

    @property
    def one(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, self.dom.one)

    def generator(self, index: int) -> "AlgebraicNumber":
        """The generator ``g<index>`` (1-based) as an element of this tower."""
        return AlgebraicNumber(self, self.gens[index - 1])

    def generator_by_name(self, name: str) -> "AlgebraicNumber":
        return self.generator(self.names.index(name) + 1)

    def ring(self, names: str):
        return _ring_for(self, names)

    # -- extension ----------------------------------------------------------
    def extend(self, minpoly: Sequence, name: str | None = None) -> "Tower":
        """Adjoin a root of ``minpoly`` (coefficients low to high, monic).

        The caller is responsible for irreducibility; :func:`adjoin_root`
        checks it.
        """
        if self.height + 1 > LIMITS.max_tower_height:
            raise TowerLimitError(
                f"tower height limit {LIMITS.max_tower_height} reached")
        coeffs = tuple(self.dom.convert(c) for c in minpoly)
        if name is None:
            name = f"g{self.height + 1}"
        return _extend_cached(self, coeffs, name)

    def embed(self, value, source: "Tower"):
        """Map an element of ``source.dom`` into ``self.dom``."""
        if source == self:
            return value
        path = []
        t = self
        while t != source:
            if t is None or t.height <= source.height:
                raise TowerMismatchError(f"{source!r} is not an ancestor of {self!r}")
            path.append(t)
            t = t.parent
        for level in reversed(path):
            value = level._from_parent(value)
        return value

    def _from_parent(self, value):
        pdom = self.parent.dom
        if pdom is QQ:
            return self.dom.convert(value)
        coeffs = value.to_list()
        out = self.dom.zero
        for c in coeffs:
            out = out * self.parent_theta + self.dom.convert(c)
        return out

    # -- canonical generator coordinates ------------------------------------
    @functools.cached_property
    def _monomials(self) -> list[tuple[int, ...]]:
        degs = [len(level.minpoly) - 1 for level in self.chain()[1:]]
        return [tuple(reversed(e)) for e in itertools.product(*(range(d) for d in reversed(degs)))]

    @functools.cached_property
    def _canonical_inverse(self):
        n = self.degree
        cols = []
        for exps in self._monomials:
            v = self.dom.one
            for g, e in zip(self.gens, exps):
                v = v * g ** e if e else v
            cols.append(_coords(self.dom, v, n))
        mat = DomainMatrix([[cols[j][i] for j in range(n)] for i in range(n)], (n, n), QQ)
        return mat.inv().to_list()

    def canonical_coordinates(self, value) -> dict[tuple[int, ...], Fraction]:
        if self.dom is QQ:
            return {(): qq_to_fraction(value)} if value else {}
        n = self.degree
        v = _coords(self.dom, value, n)
        inv = self._canonical_inverse
        out = {}
        for i, exps in enumerate(self._monomials):
            c = QQ.zero
            for j in range(n):
                if v[j]:
                    c += inv[i][j] * v[j]
            if c:
                key = exps
                while key and key[-1] == 0:
                    key = key[:-1]
                out[key] = qq_to_fraction(c)
        return out


def _coords(dom, value, n):
    """Coordinates (low to high) of an algebraic-field element."""
    lst = value.to_list()[::-1]
    return [lst[i] if i < len(lst) else QQ.zero for i in range(n)]


_RATIONALS = Tower(None, None, None, QQ, (), None)


def rationals() -> Tower:
    return _RATIONALS


@functools.lru_cache(maxsize=None)
def _ring_for(tower: Tower, names: str):
    return sympy_ring(names, tower.dom)[0]


@functools.lru_cache(maxsize=None)
def _extend_cached(parent: Tower, coeffs: tuple, name: str) -> Tower:
    n = len(coeffs) - 1
    if parent.dom is QQ:
        poly = Poly([coeffs[i] for i in range(n, -1, -1)], _W, domain=QQ)
        dom = QQ.alg_field_from_poly(poly)
        gen = dom.new([QQ.one, QQ.zero])
        return Tower(parent, name, coeffs, dom, (gen,), None)

    # Primitive element theta' = g + k*theta; its minimal polynomial is the
    # norm of m(X - k*theta), squarefree exactly when theta' generates.
    R, th, X = sympy_ring("th,X", QQ)
    pmod = parent.dom.mod.to_list()
    P = sum((QQ.convert(c) * th ** i for i, c in enumerate(reversed(pmod))), R.zero)

    def lift_coeff(c, var):
        lst = c.to_list()
        return sum((QQ.convert(a) * var ** i for i, a in enumerate(reversed(lst))), R.zero)

    for k in _shift_candidates():
        shifted = X - k * th
        mt = sum((lift_coeff(c, th) * shifted ** i for i, c in enumerate(coeffs)), R.zero)
        norm = P.resultant(mt)
        Ru, x = sympy_ring("x", QQ)
        nu = Ru.from_dict({(m[-1],): c for m, c in norm.items()}) if norm else Ru.zero
        if nu.degree() != parent.degree * n:
            continue
        if nu.gcd(nu.diff(x)).degree() > 0:
            continue
        nu = nu.monic()
        poly = Poly([nu.get((i,), QQ.zero) for i in range(nu.degree(), -1, -1)], _W, domain=QQ)
        dom = QQ.alg_field_from_poly(poly)
        tp = dom.new([QQ.one, QQ.zero])
        Rk, Y = sympy_ring("Y", dom)
        Pk = sum((dom.convert(c) * Y ** i for i, c in enumerate(reversed(pmod))), Rk.zero)
        target = Rk.ground_new(tp) - k * Y
        Mk = Rk.zero
        for i, c in enumerate(coeffs):
            lst = c.to_list()
            ci = sum((dom.convert(a) * Y ** j for j, a in enumerate(reversed(lst))), Rk.zero)
            Mk += ci * target ** i
        g = Pk.gcd(Mk)
        if g.degree() != 1:
            continue
        g = g.monic()
        theta_img = -g.coeff(1)
        child = Tower(parent, name, coeffs, dom, (), theta_img)
        gens = tuple(child._from_parent(gv) for gv in parent.gens) + (tp - k * theta_img,)
        child.gens = gens
        return child
    raise AssertionError("no primitive element found")  # pragma: no cover


def _shift_candidates():
    yield 0
    for k in itertools.count(1):
        yield k
        yield -k


def join(*towers: Tower | None) -> Tower:
    """The deepest tower of a chain; error when the towers are unrelated."""
    best = None
    for t in towers:
        if t is None:
            continue
        if best is None or t.extends(best):
            best = t
        elif not best.extends(t):
            raise TowerMismatchError(f"unrelated towers {best!r} and {t!r}")
    return best if best is not None else _RATIONALS


class AlgebraicNumber:
    """An element of a tower, stored in primitive-element coordinates."""

    __slots__ = ("tower", "value", "_hash")

    def __init__(self, tower: Tower, value):
        self.tower = tower
        self.value = value
        self._hash = None

    @classmethod
    def rational(cls, q, tower: Tower | None = None) -> "AlgebraicNumber":
        tower = tower or _RATIONALS
        return cls(tower, tower.dom.convert(qq(q)))

    # -- coercion -----------------------------------------------------------
    def lift(self, tower: Tower) -> "AlgebraicNumber":
        if tower == self.tower:
            return self
        return AlgebraicNumber(tower, tower.embed(self.value, self.tower))

    def _pair(self, other):
        if isinstance(other, AlgebraicNumber):
            t = join(self.tower, other.tower)
            return t, t.embed(self.value, self.tower), t.embed(other.value, other.tower)
        if isinstance(other, (int, Fraction)):
            t = self.tower
            return t, self.value, t.dom.convert(qq(other))
        return None

    def _op(self, other, fn, reverse=False):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        t, a, b = pair
        if reverse:
            a, b = b, a
        return AlgebraicNumber(t, fn(a, b))

    def __add__(self, other):
        return self._op(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._op(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._op(other, lambda a, b: a - b, reverse=True)

    def __mul__(self, other):
        return self._op(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        t, a, b = pair
        if t.dom.is_zero(b):
            raise ZeroDivisionError("division by zero algebraic number")
        return AlgebraicNumber(t, t.dom.quo(a, b))

    def __rtruediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        t, a, b = pair
        if t.dom.is_zero(a):
            raise ZeroDivisionError("division by zero algebraic number")
        return AlgebraicNumber(t, t.dom.quo(b, a))

    def __neg__(self):
        return AlgebraicNumber(self.tower, -self.value)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (self.tower.one / self) ** (-n)
        return AlgebraicNumber(self.tower, self.tower.dom.pow(self.value, n) if n else self.tower.dom.one)

    def inverse(self) -> "AlgebraicNumber":
        return self.tower.one / self

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.tower.dom.is_zero(self.value)

    def __bool__(self):
        return not self.is_zero()

    def is_one(self) -> bool:
        return self == 1

    def is_rational(self) -> bool:
        return set(self.canonical_form()) <= {()}

    def to_fraction(self) -> Fraction:
        form = self.canonical_form()
        if not set(form) <= {()}:
            raise ValueError(f"{self} is not rational")
        return form.get((), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.value == self.tower.dom.convert(qq(other))
        if not isinstance(other, AlgebraicNumber):
            return NotImplemented
        t = join(self.tower, other.tower)
        return t.embed(self.value, self.tower) == t.embed(other.value, other.tower)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.canonical_form().items()))
        return self._hash

    # -- presentation -------------------------------------------------------
    def canonical_form(self) -> dict[tuple[int, ...], Fraction]:
        """Coordinates on the monomial basis ``g1^e1 ... gh^eh`` (ei < deg)."""
        return self.tower.canonical_coordinates(self.value)

    def sort_key(self) -> tuple:
        return tuple(sorted(self.canonical_form().items()))

    def is_simple_term(self) -> bool:
        """True when the printed form has no top level sum."""
        return len(self.canonical_form()) <= 1

    def __str__(self):
        form = self.canonical_form()
        if not form:
            return "0"
        names = self.tower.names
        parts = []
        for exps in sorted(form, key=lambda e: (sum(e), e), reverse=True):
            c = form[exps]
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(exps) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"AlgebraicNumber({self})"


def alg_equals(a: AlgebraicNumber, b: AlgebraicNumber) -> bool:
    """Exact equality; raises :class:`TowerMismatchError` for unrelated towers."""
    return a == b


def as_number(value, tower: Tower | None = None) -> AlgebraicNumber:
    if isinstance(value, AlgebraicNumber):
        return value.lift(join(value.tower, tower)) if tower is not None else value
    return (tower or _RATIONALS).number(value)


class UniPoly:
    """Univariate polynomial over a tower (variable printed as ``t``)."""

    __slots__ = ("tower", "rep")

    def __init__(self, tower: Tower, rep):
        self.tower = tower
        self.rep = rep

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, tower: Tower | None = None) -> "UniPoly":
        coeffs = list(coeffs)
        tower = join(tower, *(c.tower for c in coeffs if isinstance(c, AlgebraicNumber)))
        R = tower.ring("t")
        terms = {}
        for i, c in enumerate(coeffs):
            v = as_number(c, tower).lift(tower).value
            if not tower.dom.is_zero(v):
                terms[(i,)] = v
        return cls(tower, R.from_dict(terms) if terms else R.zero)

    @classmethod
    def monomial(cls, n: int, coeff=1, tower: Tower | None = None) -> "UniPoly":
        return cls.from_coeffs([0] * n + [coeff], tower)

    @classmethod
    def constant(cls, c, tower: Tower | None = None) -> "UniPoly":
        return cls.from_coeffs([c], tower)

    # -- structure ----------------------------------------------------------
    @property
    def degree(self):
        return NEG_INF if not self.rep else self.rep.degree()

    @property
    def valuation(self):
        if not self.rep:
            return POS_INF
        return min(m[0] for m in self.rep.keys())

    def is_zero(self) -> bool:
        return not self.rep

    def coefficient(self, i: int) -> AlgebraicNumber:
        return AlgebraicNumber(self.tower, self.rep.get((i,), self.tower.dom.zero))

    def coeffs(self) -> list[AlgebraicNumber]:
        if not self.rep:
            return []
        return [self.coefficient(i) for i in range(self.degree + 1)]

    def raw_coeffs(self, n: int | None = None) -> list:
        """Domain coefficients low to high, padded or cut to length ``n``."""
        if n is None:
            n = 0 if not self.rep else self.degree + 1
        z = self.tower.dom.zero
        return [self.rep.get((i,), z) for i in range(n)]

    @property
    def leading_coefficient(self) -> AlgebraicNumber:
        return self.coefficient(self.degree) if self.rep else self.tower.zero

    def lift(self, tower: Tower) -> "UniPoly":
        if tower == self.tower:
            return self
        R = tower.ring("t")
        return UniPoly(tower, R.from_dict(
            {m: tower.embed(c, self.tower) for m, c in self.rep.items()}) if self.rep else R.zero)

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, UniPoly):
            t = join(self.tower, other.tower)
            return t, self.lift(t).rep, other.lift(t).rep
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            n = as_number(other)
            t = join(self.tower, n.tower)
            return t, self.lift(t).rep, t.ring("t")(n.lift(t).value)
        return None

    def _op(self, other, fn):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        t, a, b = c
        return UniPoly(t, fn(a, b))

    def __add__(self, other):
        return self._op(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._op(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._op(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._op(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return UniPoly(self.tower, -self.rep)

    def __pow__(self, n: int):
        return UniPoly(self.tower, self.rep ** n)

    def __divmod__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        t, a, b = c
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        q, r = a.div(b)
        return UniPoly(t, q), UniPoly(t, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        _, a, b = c
        return a == b

    __hash__ = None

    def __call__(self, x):
        """Evaluate at a number, or compose with another polynomial."""
        if isinstance(x, UniPoly):
            t = join(self.tower, x.tower)
            out = UniPoly(t, t.ring("t").zero)
            for c in reversed(self.lift(t).coeffs()):
                out = out * x + c
            return out
        x = as_number(x)
        t = join(self.tower, x.tower)
        out = t.zero
        for c in reversed(self.lift(t).coeffs()):
            out = out * x + c
        return out

    def derivative(self) -> "UniPoly":
        return UniPoly(self.tower, self.rep.diff(self.rep.ring.gens[0]))

    def truncate(self, n: int) -> "UniPoly":
        """Remainder modulo ``t^n``."""
        R = self.rep.ring
        return UniPoly(self.tower, R.from_dict({m: c for m, c in self.rep.items() if m[0] < n})
                       if self.rep else R.zero)

    def shift(self, n: int) -> "UniPoly":
        """Multiply by ``t^n`` (``n`` may be negative when divisible)."""
        R = self.rep.ring
        if not self.rep:
            return self
        if n < 0 and self.valuation < -n:
            raise ValueError("polynomial not divisible by requested power of t")
        return UniPoly(self.tower, R.from_dict({(m[0] + n,): c for m, c in self.rep.items()}))

    def monic(self) -> "UniPoly":
        return UniPoly(self.tower, self.rep.monic()) if self.rep else self

    def gcd(self, other: "UniPoly") -> "UniPoly":
        t, a, b = self._coerce(other)
        return UniPoly(t, a.gcd(b)).monic()

    def is_monic(self) -> bool:
        return bool(self.rep) and self.leading_coefficient == 1

    # -- factorisation ------------------------------------------------------
    def _check_cap(self):
        cap = (LIMITS.rational_factor_degree_cap if self.tower.is_rational
               else LIMITS.factor_degree_cap)
        if self.rep and self.degree > cap:
            raise DegreeCapError(f"degree {self.degree} exceeds factorisation cap {cap}")

    def factor(self) -> tuple[AlgebraicNumber, list[tuple["UniPoly", int]]]:
        """Irreducible factorisation over the polynomial's own tower."""
        self._check_cap()
        unit, facs = self.rep.factor_list()
        out = [(UniPoly(self.tower, f).monic(), e) for f, e in facs]
        lc = self.leading_coefficient
        out.sort(key=lambda fe: (fe[0].degree, fe[0].sort_key(), fe[1]))
        return lc, out

    def squarefree_decomposition(self) -> list[tuple["UniPoly", int]]:
        _, facs = self.rep.sqf_list()
        return [(UniPoly(self.tower, f).monic(), e) for f, e in facs]

    def sort_key(self) -> tuple:
        return tuple(c.sort_key() for c in self.coeffs())

    # -- presentation -------------------------------------------------------
    def format(self, var: str = "t") -> str:
        if not self.rep:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coefficient(i)
            if c.is_zero():
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            parts.append(_format_term(c, mono))
        return _join_terms(parts)

    def __str__(self):
        return self.format("t")

    def __repr__(self):
        return f"UniPoly({self})"


def _format_term(c: AlgebraicNumber, mono: str) -> str:
    if not mono:
        return str(c)
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    s = str(c)
    if not c.is_simple_term():
        s = f"({s})"
    return f"{s}*{mono}"


def _join_terms(parts: list[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def adjoin_root(tower: Tower, minpoly: UniPoly, name: str | None = None
                ) -> tuple[Tower, AlgebraicNumber]:
    """Adjoin a root of ``minpoly``; returns the (possibly unchanged) tower and the root.

    The polynomial is factored over ``tower`` first and a root of the lowest
    degree factor is used (ties broken by coefficient order).  A linear factor
    gives a root in ``tower`` itself.
    """
    tower = join(tower, minpoly.tower)
    p = minpoly.lift(tower)
    if p.degree < 1:
        raise ValueError("cannot adjoin a root of a constant polynomial")
    _, factors = p.factor()
    f = factors[0][0]
    if f.degree == 1:
        return tower, -f.coefficient(0)
    new = tower.extend(f.raw_coeffs(), name)
    return new, new.generator(new.height)


def roots_in_closure(p: UniPoly, tower: Tower | None = None
                     ) -> list[tuple[AlgebraicNumber, int]]:
    """All roots of ``p`` with multiplicities, extending the tower as needed.

    Every returned root lives in the same (final) tower.
    """
    tower = join(p.tower, tower)
    if p.degree < 1:
        return []
    pending = p.lift(tower).squarefree_decomposition()
    roots: list[tuple[AlgebraicNumber, int]] = []
    while pending:
        nonlinear = []
        for f, e in pending:
            _, facs = f.lift(tower).factor()
            for g, _ in facs:
                if g.degree == 1:
                    roots.append((-g.coefficient(0), e))
                else:
                    nonlinear.append((g, e))
        if not nonlinear:
            break
        nonlinear.sort(key=lambda ge: (ge[0].degree, ge[0].sort_key()))
        g, _ = nonlinear[0]
        tower = tower.extend(g.raw_coeffs())
        pending = nonlinear
    return [(r.lift(tower), e) for r, e in roots]


def tower_of(*items) -> Tower:
    """Join of the towers carried by the given objects (ignoring plain numbers)."""
    towers = []
    for it in items:
        t = getattr(it, "tower", None)
        if t is not None:
            towers.append(t)
    return join(*towers)
