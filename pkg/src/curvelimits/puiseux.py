"""Newton-Puiseux expansion of the branches of a curve at a flag.

In flag coordinates the point is the origin of the chart ``x = 1`` and the
flag line is ``z = 0``.  Branches are returned as fractional power series
``z = sum c_i y^(e_i)``; branches whose series in ``y`` would start with an
exponent below 1 (those tangent to ``y = 0``) are expanded the other way
round, ``y = sum c_i z^(e_i)``, and flagged ``swapped``.

The expansion works one squarefree class of the equation at a time and
repeats each branch by the multiplicity of its class.  Once a branch is
separated from the others its series is continued by Newton iteration on
power series, so extending it to a higher order is cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Optional

from .arith import (AlgebraicNumber, Tower, UniPoly, _format_term, _join_terms, join,
                    roots_in_closure)
from .config import LIMITS
from .curve import Flag, PlaneCurve, _as_curve, flag_transform, local_form
from .errors import GeometryError, PrecisionCapError
from .forms import HomogeneousForm
from .newton import lower_hull

_MAX_SPLIT_STEPS = 400


def default_order(degree: int) -> int:
    return LIMITS.puiseux_order if LIMITS.puiseux_order is not None else 4 * degree * degree


def _power(var: str, e: Fraction) -> str:
    if e == 0:
        return ""
    if e == 1:
        return var
    return f"{var}^{e}" if Fraction(e).denominator == 1 else f"{var}^({e})"


@dataclass
class PuiseuxBranch:
    """A truncated fractional power series for one branch.

    ``terms`` lists ``(exponent, coefficient)`` with nonzero coefficients.
    Every term with exponent below ``known_to`` is present; ``known_to`` is
    None for an exact (finite) series.
    """

    terms: list[tuple[Fraction, AlgebraicNumber]]
    known_to: Optional[Fraction]
    ramification: int
    swapped: bool
    multiplicity: int = 1
    _leaf: object = field(default=None, repr=False, compare=False)
    _expander: object = field(default=None, repr=False, compare=False)

    @property
    def exact(self) -> bool:
        return self.known_to is None

    @property
    def tower(self) -> Tower:
        return join(*(c.tower for _, c in self.terms))

    @property
    def lambda0(self):
        """Exponent of the first term (infinity for the zero series)."""
        return self.terms[0][0] if self.terms else float("inf")

    @property
    def is_tangent(self) -> bool:
        """Tangent to the flag line ``z = 0``."""
        return not self.swapped and (not self.terms or self.terms[0][0] > 1)

    def known_beyond(self, exponent: Fraction) -> bool:
        return self.known_to is None or self.known_to > exponent

    def coefficient(self, exponent: Fraction) -> AlgebraicNumber:
        if not self.known_beyond(exponent):
            self.extend(exponent)
        for e, c in self.terms:
            if e == exponent:
                return c
        t = self.tower
        return t.zero

    def truncation(self, below: Fraction) -> list[tuple[Fraction, AlgebraicNumber]]:
        """Terms with exponent strictly below ``below``."""
        if self.known_to is not None and self.known_to < below:
            self.extend(below)
        return [(e, c) for e, c in self.terms if e < below]

    def extend(self, order: Fraction) -> None:
        """Make every term with exponent ``<= order`` known (separated branches only)."""
        if self.known_beyond(order):
            return
        if self._expander is None:
            raise PrecisionCapError("branch snapshot cannot be extended")
        self._expander.extend_leaf(self._leaf, order)
        self.terms, self.known_to = self._leaf.series_terms()

    def __str__(self):
        var, dep = ("z", "y") if self.swapped else ("y", "z")
        body = _join_terms([_format_term(c, _power(var, e)) for e, c in self.terms])
        if self.exact:
            return f"{dep} = {body}"
        tail = f"O({_power(var, self.known_to)})"
        return f"{dep} = {tail}" if not self.terms else f"{dep} = {body} + {tail}"


class _Leaf:
    """A node of the expansion tree."""

    def __init__(self, tower, psi, Q, E, terms, r, exact=False):
        self.tower = tower
        self.psi = psi  # {(j, k): dom value}: j power of the local parameter, k of w
        self.Q = Q
        self.E = E
        self.terms = terms  # list of (Fraction, AlgebraicNumber)
        self.r = r
        self.exact = exact
        self.series = None  # dense list of dom values once solved (simple leaves)
        self.series_exact = False
        self._next = None

    @property
    def simple(self) -> bool:
        return self.r == 1 and not self.exact

    def next_exponent(self) -> Fraction | None:
        """Smallest exponent of a term not yet recorded (None if exact)."""
        if self.exact:
            return None
        if self._next is None:
            edges = _edges(self.psi, _kmax(self.psi))
            mus = [mu for _, _, mu in edges]
            self._next = Fraction(self.E, self.Q) + min(mus) / self.Q if mus else None
        return self._next

    def series_terms(self):
        terms = list(self.terms)
        if self.exact:
            return terms, None
        if self.series is None:
            return terms, self.next_exponent()
        for n, v in enumerate(self.series):
            if not self.tower.dom.is_zero(v):
                terms.append((Fraction(self.E + n, self.Q), AlgebraicNumber(self.tower, v)))
        if self.series_exact:
            return terms, None
        return terms, Fraction(self.E + len(self.series), self.Q)


def _kmax(psi) -> int:
    return min(k for (j, k) in psi if j == 0)


def _edges(psi, kmax: int):
    """Edges of the polygon (in the (k, j) plane) from the lowest ``k`` to ``kmax``."""
    pts = [(k, j) for (j, k) in psi if k <= kmax]
    hull = lower_hull(pts)
    out = []
    for (ka, ja), (kb, jb) in zip(hull, hull[1:]):
        out.append(((ka, ja), (kb, jb), Fraction(ja - jb, kb - ka)))
    return out


def _lift_psi(psi, src: Tower, dst: Tower):
    if src == dst:
        return psi
    return {m: dst.embed(v, src) for m, v in psi.items()}


class BranchExpander:
    """Expansion tree for one squarefree local equation in one orientation."""

    def __init__(self, phi: dict, tower: Tower, swapped: bool, multiplicity: int):
        self.tower = tower
        self.swapped = swapped
        self.multiplicity = multiplicity
        psi = {((k, j) if swapped else (j, k)): v for (j, k), v in phi.items()}
        self.leaves: list[_Leaf] = []
        self._root(psi)

    def _root(self, psi):
        if not psi:
            return
        e = min(j for j, _ in psi)
        psi = {(j - e, k): v for (j, k), v in psi.items()}
        k0 = min(k for _, k in psi)
        if (0, 0) in psi and k0 == 0:
            return  # does not pass through the origin
        if k0 > 0:
            self.leaves.append(_Leaf(self.tower, {}, 1, 0, [], k0, exact=True))
        kmax = _kmax(psi)
        if kmax == k0:
            return
        for (ka, ja), (kb, jb), mu in _edges(psi, kmax):
            if (self.swapped and mu <= 1) or (not self.swapped and mu < 1):
                continue
            self.leaves.extend(self._children(
                _Leaf(self.tower, psi, 1, 0, [], kmax), (ka, ja), (kb, jb), mu))

    def _children(self, leaf: _Leaf, start, end, mu: Fraction) -> list[_Leaf]:
        (ka, ja), (kb, jb) = start, end
        level = ja + mu * ka
        coeffs = [leaf.tower.dom.zero] * (kb - ka + 1)
        for (j, k), v in leaf.psi.items():
            if ka <= k <= kb and j + mu * k == level:
                coeffs[k - ka] = v
        poly = UniPoly(leaf.tower, leaf.tower.ring("t").from_dict(
            {(i,): c for i, c in enumerate(coeffs) if not leaf.tower.dom.is_zero(c)}))
        roots = roots_in_closure(poly)
        if roots:
            self.tower = join(self.tower, roots[0][0].tower)
        p, q = mu.numerator, mu.denominator
        out = []
        for c, mult in roots:
            t = join(self.tower, c.tower)
            self.tower = t
            psi = _lift_psi(leaf.psi, leaf.tower, t)
            cv = c.lift(t).value
            new: dict = {}
            cpow = [t.dom.one]
            for _ in range(max(k for _, k in psi) + 1):
                cpow.append(cpow[-1] * cv)
            for (j, k), v in psi.items():
                base = q * j + p * k
                for i in range(k + 1):
                    term = v * comb(k, i) * cpow[k - i]
                    key = (base, i)
                    new[key] = new.get(key, t.dom.zero) + term
            new = {m: v for m, v in new.items() if not t.dom.is_zero(v)}
            shift = min(j for j, _ in new)
            new = {(j - shift, k): v for (j, k), v in new.items()}
            E, Q = leaf.E * q + p, leaf.Q * q
            terms = [(e, a.lift(t)) for e, a in leaf.terms] + [(Fraction(E, Q), c.lift(t))]
            out.append(_Leaf(t, new, Q, E, terms, mult))
        return out

    def _split(self, leaf: _Leaf) -> list[_Leaf]:
        kmax = leaf.r
        out = []
        k0 = min(k for _, k in leaf.psi)
        if k0 > 0:
            out.append(_Leaf(leaf.tower, leaf.psi, leaf.Q, leaf.E, leaf.terms, k0, exact=True))
        for start, end, mu in _edges(leaf.psi, kmax):
            out.extend(self._children(leaf, start, end, mu))
        return out

    def separate(self) -> None:
        """Split until every leaf is a single branch."""
        steps = 0
        while any(l.r > 1 and not l.exact for l in self.leaves):
            steps += 1
            if steps > _MAX_SPLIT_STEPS:
                raise PrecisionCapError("branches failed to separate")
            new = []
            for leaf in self.leaves:
                new.extend(self._split(leaf) if leaf.r > 1 and not leaf.exact else [leaf])
            self.leaves = new

    def expand_to(self, order: Fraction) -> None:
        """Split non-simple leaves whose next term is at or below ``order``."""
        steps = 0
        while True:
            todo = [l for l in self.leaves
                    if l.r > 1 and not l.exact and l.next_exponent() is not None
                    and l.next_exponent() <= order]
            if not todo:
                break
            steps += 1
            if steps > _MAX_SPLIT_STEPS:
                raise PrecisionCapError("expansion did not terminate")
            new = []
            for leaf in self.leaves:
                new.extend(self._split(leaf) if leaf in todo else [leaf])
            self.leaves = new
        for leaf in self.leaves:
            if leaf.simple:
                self.extend_leaf(leaf, order)

    def extend_leaf(self, leaf: _Leaf, order: Fraction) -> None:
        if leaf.exact or leaf.series_exact:
            return
        need = int((order * leaf.Q - leaf.E).__floor__()) + 1  # coefficients n = 0..need-1
        need = max(need, 1)
        if leaf.series is not None and len(leaf.series) >= need:
            return
        leaf.series, leaf.series_exact = _solve_simple(leaf.psi, leaf.tower, need)

    def branches(self) -> list[PuiseuxBranch]:
        out = []
        for leaf in self.leaves:
            terms, known = leaf.series_terms()
            for _ in range(1 if leaf.simple or leaf.exact else leaf.r):
                b = PuiseuxBranch(terms, known, leaf.Q, self.swapped, self.multiplicity,
                                  leaf if leaf.simple else None, self if leaf.simple else None)
                out.append(b)
            if leaf.exact and leaf.r > 1:
                for _ in range(leaf.r - 1):
                    out.append(PuiseuxBranch(terms, known, leaf.Q, self.swapped,
                                             self.multiplicity))
        return out


def _smul(a, b, n, zero):
    out = [zero] * n
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        for j in range(min(len(b), n - i)):
            y = b[j]
            if y:
                out[i + j] += x * y
    return out


def _solve_simple(psi, tower: Tower, n: int):
    """Power series root ``w(v) = sum_{i<n} w_i v^i`` with ``w(0) = 0``.

    ``psi`` has a nonzero ``w``-linear constant term.  Returns the
    coefficient list and whether the root is an exact polynomial.
    """
    dom = tower.dom
    zero = dom.zero
    kdeg = max(k for _, k in psi)
    A = [[zero] * n for _ in range(kdeg + 1)]
    for (j, k), v in psi.items():
        if j < n:
            A[k][j] = A[k][j] + v
    if not any(k == 0 for _, k in psi):
        return [], True
    a = A[1][0]
    if dom.is_zero(a):
        raise GeometryError("internal: expected a simple root")
    inv_a = dom.quo(dom.one, a)
    w = [zero] * n
    prec = 1
    while True:
        prec = min(2 * prec, n)
        # value and derivative of psi at w, mod v^prec
        val = [zero] * prec
        der = [zero] * prec
        for k in range(kdeg, -1, -1):
            val = _smul(val, w, prec, zero)
            val = [x + y for x, y in zip(val, A[k][:prec])]
            if k >= 1:
                der = _smul(der, w, prec, zero)
                der = [x + k * y for x, y in zip(der, A[k][:prec])]
        # invert der (constant term a)
        inv = [zero] * prec
        inv[0] = inv_a
        for i in range(1, prec):
            s = zero
            for j in range(1, i + 1):
                if der[j] and inv[i - j]:
                    s += der[j] * inv[i - j]
            inv[i] = -s * inv_a
        corr = _smul(val, inv, prec, zero)
        w = [w[i] - corr[i] if i < prec else w[i] for i in range(n)]
        if prec == n:
            break
    # one more Newton step would not change w; check exactness for short roots
    last = max((i for i, v in enumerate(w) if not dom.is_zero(v)), default=-1)
    exact = False
    if last < n // 2:
        R = tower.ring("v,w")
        P = R.from_dict({(j, k): v for (j, k), v in psi.items()})
        wv = R.from_dict({(i, 0): v for i, v in enumerate(w) if not dom.is_zero(v)}) \
            if last >= 0 else R.zero
        exact = not P.compose(R.gens[1], wv)
        if exact:
            w = w[:last + 1]
    return w, exact


@dataclass
class BranchSet:
    """All branches of a curve at a flag, with the data needed downstream."""

    flag: Flag
    frame: list
    local: HomogeneousForm
    expanders: list[BranchExpander]
    tower: Tower

    def branches(self) -> list[PuiseuxBranch]:
        out = []
        for ex in self.expanders:
            out.extend(ex.branches())
        return out


def _local_classes(C: PlaneCurve, flag: Flag):
    frame = flag_transform(flag.point, flag.line)
    G = local_form(C.form, frame)
    _, classes = G.rep.sqf_list()
    out = []
    for f, e in classes:
        if f.is_ground:
            continue
        phi = {(m[1], m[2]): v for m, v in f.items()}
        out.append((phi, e))
    return frame, G, out


def branch_set(C, flag: Flag, order=None, separate: bool = False) -> BranchSet:
    C = _as_curve(C)
    if not C.contains(flag.point):
        raise GeometryError(f"flag point {flag.point} is not on the curve")
    frame, G, classes = _local_classes(C, flag)
    tower = G.tower
    expanders = []
    order = Fraction(default_order(C.degree) if order is None else order)
    for phi, e in classes:
        for swapped in (False, True):
            ex = BranchExpander(phi, tower, swapped, e)
            if separate:
                ex.separate()
            ex.expand_to(order)
            tower = join(tower, ex.tower)
            expanders.append(ex)
    return BranchSet(flag, frame, G, expanders, tower)


def puiseux_branches(C, flag: Flag, order=None) -> list[PuiseuxBranch]:
    """Branches at the flag point truncated beyond ``order``.

    Multiplicities of repeated components are reported in each branch's
    ``multiplicity`` field (the branch itself is listed once).  Branches that
    are not yet separated at ``order`` appear once per branch with identical
    truncations.
    """
    C = _as_curve(C)
    order = Fraction(default_order(C.degree) if order is None else order)
    bs = branch_set(C, flag, order)
    out = []
    for b in bs.branches():
        terms = [(e, c) for e, c in b.terms if e <= order]
        out.append(PuiseuxBranch(terms, b.known_to, b.ramification, b.swapped, b.multiplicity))
    return out


@dataclass
class CharacteristicDatum:
    """A cluster of tangent branches agreeing below ``C`` and splitting at ``C``."""

    C: Fraction
    lambda0: Fraction
    truncation: list[tuple[Fraction, AlgebraicNumber]]  # terms with exponent < C
    gammas: list[tuple[AlgebraicNumber, int]]  # coefficient at C, with multiplicity
    gamma_lambda0: AlgebraicNumber
    gamma_mid: AlgebraicNumber  # coefficient at (lambda0 + C) / 2

    @property
    def S(self) -> int:
        return sum(m for _, m in self.gammas)

    @property
    def distinct_gammas(self) -> list[AlgebraicNumber]:
        out = []
        for g, _ in self.gammas:
            if g not in out:
                out.append(g)
        return out

    @property
    def tower(self) -> Tower:
        return join(*(g.tower for g, _ in self.gammas), self.gamma_lambda0.tower)

    def __str__(self):
        gs = ", ".join(f"{g}" + (f" (x{m})" if m > 1 else "") for g, m in self.gammas)
        return (f"C={self.C} lambda0={self.lambda0} S={self.S} "
                f"gamma_lambda0={self.gamma_lambda0} gamma_mid={self.gamma_mid} gamma_C={{{gs}}}")


def _separation(a: PuiseuxBranch, b: PuiseuxBranch, cap: Fraction) -> Fraction | None:
    """First exponent where two distinct separated branches differ."""
    bound = Fraction(1)
    while True:
        a.extend(bound)
        b.extend(bound)
        done = a.exact and b.exact
        exps = sorted({e for e, _ in a.terms + b.terms if done or e <= bound})
        for e in exps:
            if a.coefficient(e) != b.coefficient(e):
                return e
        if done:
            return None  # identical finite series: same branch
        if bound > cap:
            raise PrecisionCapError(f"branches not separated below order {cap}")
        bound *= 2


def tangent_branches(bs: BranchSet) -> list[PuiseuxBranch]:
    return [b for b in bs.branches() if b.is_tangent]


def characteristic_exponents(branches: list[PuiseuxBranch], cap: Fraction) -> list[Fraction]:
    exps = set()
    for i, a in enumerate(branches):
        for b in branches[i + 1:]:
            e = _separation(a, b, cap)
            if e is None:
                continue
            lam = min(a.lambda0, b.lambda0)
            if e > lam:
                exps.add(e)
    return sorted(exps)


def cluster_data(branches: list[PuiseuxBranch], C: Fraction) -> list[CharacteristicDatum]:
    """Group tangent branches by their truncation below ``C`` (nonzero truncations only)."""
    groups: list[tuple[list, list[PuiseuxBranch]]] = []
    for b in branches:
        b.extend(C)
        trunc = b.truncation(C)
        if not trunc:
            continue
        for key, members in groups:
            if _same_terms(key, trunc):
                members.append(b)
                break
        else:
            groups.append((trunc, [b]))
    out = []
    for trunc, members in groups:
        lam = trunc[0][0]
        if C <= lam:
            continue
        gammas: list[tuple[AlgebraicNumber, int]] = []
        for b in members:
            g = b.coefficient(C)
            for i, (h, m) in enumerate(gammas):
                if h == g:
                    gammas[i] = (h, m + b.multiplicity)
                    break
            else:
                gammas.append((g, b.multiplicity))
        mid = (lam + C) / 2
        gmid = next((c for e, c in trunc if e == mid), trunc[0][1] * 0)
        out.append(CharacteristicDatum(C, lam, trunc, gammas, trunc[0][1], gmid))
    return out


def _same_terms(a, b) -> bool:
    return len(a) == len(b) and all(e1 == e2 and c1 == c2 for (e1, c1), (e2, c2) in zip(a, b))


def characteristics(C, flag: Flag, order=None) -> list[CharacteristicDatum]:
    """Characteristic data of the branches tangent to the flag line.

    Each datum is a cluster of branches that agree below some exponent ``C``
    (greater than their first exponent) and take at least two different
    coefficients at ``C``.
    """
    C_ = _as_curve(C)
    cap = Fraction(default_order(C_.degree) if order is None else order)
    bs = branch_set(C_, flag, order=1, separate=True)
    tb = tangent_branches(bs)
    out = []
    for e in characteristic_exponents(tb, cap):
        for datum in cluster_data(tb, e):
            if len(datum.distinct_gammas) >= 2:
                out.append(datum)
    return out
