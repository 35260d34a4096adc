"""Extended affine Weyl group W~ = X x| W0: lengths, reduced words, Omega, Newton points.

An element is stored in normal form (lambda, w): the translation part in X and
the finite part in W0, with (l, w)(m, v) = (l + w(m), wv). Lengths come from
the closed formula len(t^l w) = sum_{a in R+} |<l, a_vee> - delta_{w^-1}(a)|;
the alcove-separation count and a BFS word oracle are kept alongside as
independent cross-checks.

All of W~_J (parabolic lengths l_J, J_aff, Omega_J, J-positivity) is bundled
in a Frame object; the full group is the frame at J = S0. Omega_J is computed
as X/ZR_J via Smith normal form, each generator reduced to its length-zero
coset representative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotInParabolic
from .rootdata import BasedRootDatum, FiniteWeylElement
from .zlattice import quotient_by_rows, solve_exponents


class ExtAffineElement:
    __slots__ = ("datum", "translation", "fin", "_hash")

    def __init__(self, datum: BasedRootDatum, translation, fin: FiniteWeylElement):
        self.datum = datum
        self.translation = tuple(translation)
        self.fin = fin
        self._hash = hash((self.translation, fin.xmat))

    def __eq__(self, other):
        return (isinstance(other, ExtAffineElement)
                and self.translation == other.translation
                and self.fin.xmat == other.fin.xmat)

    def __hash__(self):
        return self._hash

    def __mul__(self, other: "ExtAffineElement") -> "ExtAffineElement":
        lam = tuple(a + b for a, b in zip(self.translation, self.fin.apply(other.translation)))
        return ExtAffineElement(self.datum, lam, self.datum.mul_w(self.fin, other.fin))

    def inv(self) -> "ExtAffineElement":
        wi = self.datum.inv_w(self.fin)
        lam = tuple(-x for x in wi.apply(self.translation))
        return ExtAffineElement(self.datum, lam, wi)

    def is_translation(self) -> bool:
        return self.fin.length == 0

    def apply_point(self, p):
        wp = tuple(sum(Fraction(self.fin.xmat[i][j]) * p[j] for j in range(len(p)))
                   for i in range(len(p)))
        return tuple(Fraction(t) + x for t, x in zip(self.translation, wp))

    def sort_key(self):
        return (self.translation, self.fin.word)

    def __repr__(self):
        return f"t{list(self.translation)}*{self.fin!r}"


def translation(datum: BasedRootDatum, lam) -> ExtAffineElement:
    return ExtAffineElement(datum, lam, datum.identity)


def identity_elt(datum: BasedRootDatum) -> ExtAffineElement:
    return translation(datum, (0,) * datum.rank_x)


@dataclass(frozen=True)
class AffineSimple:
    """A simple reflection of (W_J)_aff: the reflection in the hyperplane <x, root_vee> = level."""

    index: int
    root_idx: int
    level: int
    name: str

    def __repr__(self):
        return self.name


class Frame:
    """Combinatorics of W~_J inside a fixed datum; J = frozenset of simple indices.

    The frame at J = all simples is the full extended affine Weyl group.
    """

    def __init__(self, datum: BasedRootDatum, J: frozenset):
        self.datum = datum
        self.J = frozenset(J)
        self.rj = datum.r_j_indices(self.J)
        self.rj_pos = tuple(i for i in self.rj if i in datum.pos_indices)
        self.wj = datum.w_j_elements(self.J)
        self._wj_set = {w.xmat for w in self.wj}
        self.components = datum.components(self.J)
        simples = []
        for ci, comp in enumerate(self.components):
            ridx = datum.highest_coroot_root(comp) if comp else None
            nm = "s0" if len(self.components) == 1 else f"s0_{ci}"
            simples.append(AffineSimple(len(simples), ridx, 1, nm))
        for si in sorted(self.J):
            simples.append(AffineSimple(len(simples), datum.simple_indices[si], 0, f"s{si + 1}"))
        self.simples = tuple(simples)
        self.classical_of = {s.index: si for s, si in
                             zip(self.simples[len(self.components):], sorted(self.J))}
        self._refl = tuple(self._reflection(s) for s in self.simples)
        self.omega_quo = quotient_by_rows(
            datum.rank_x, [datum.roots[i] for i in self.rj] or [(0,) * datum.rank_x]
        )
        self._omega_gens = None
        self._omega_all = None
        self._interior = _interior_point(datum)
        self._len_cache: dict = {}

    # -- membership and lengths ---------------------------------------------

    def contains(self, w: ExtAffineElement) -> bool:
        return w.fin.xmat in self._wj_set

    def require(self, w: ExtAffineElement):
        if not self.contains(w):
            raise NotInParabolic(f"finite part {w.fin!r} outside W_J for J={sorted(self.J)}")

    def length(self, w: ExtAffineElement) -> int:
        key = (w.translation, w.fin.xmat)
        out = self._len_cache.get(key)
        if out is None:
            self.require(w)
            d = self.datum
            wi = d.inv_w(w.fin)
            out = 0
            for i in self.rj_pos:
                out += abs(d.pair(w.translation, d.coroots[i]) - d.delta(wi, i))
            self._len_cache[key] = out
        return out

    def length_alcove(self, w: ExtAffineElement) -> int:
        """Independent oracle: hyperplanes of H_J separating C_J from w C_J."""
        self.require(w)
        d = self.datum
        p = self._interior
        q = w.apply_point(p)
        count = 0
        for i in self.rj_pos:
            a = d.pair(p, d.coroots[i])
            b = d.pair(q, d.coroots[i])
            count += abs(math.floor(b) - math.floor(a))
        return count

    def reflection(self, s: AffineSimple) -> ExtAffineElement:
        return self._refl[s.index]

    def _reflection(self, s: AffineSimple) -> ExtAffineElement:
        d = self.datum
        root = d.roots[s.root_idx]
        refl = d.element_from_xmat(d.reflection_x(s.root_idx))
        lam = tuple(s.level * x for x in root)
        return ExtAffineElement(d, lam, refl)

    # -- reduced words -------------------------------------------------------

    def omega_part(self, w: ExtAffineElement) -> ExtAffineElement:
        """The length-zero element in the coset w (W_J)_aff."""
        cur = w
        lc = self.length(cur)
        while lc > 0:
            for s in self.simples:
                cand = cur * self.reflection(s)
                lcand = self.length(cand)
                if lcand < lc:
                    cur, lc = cand, lcand
                    break
            else:
                raise RuntimeError("stuck while reducing to the length-zero coset representative")
        return cur

    def reduced_word(self, w: ExtAffineElement):
        """(omega, word) with w = omega * prod s_i, lexicographically least word."""
        omega = self.omega_part(w)
        rest = omega.inv() * w
        word = []
        lr = self.length(rest)
        while lr > 0:
            for s in self.simples:
                cand = self.reflection(s) * rest
                lc = self.length(cand)
                if lc < lr:
                    word.append(s.index)
                    rest, lr = cand, lc
                    break
            else:
                raise RuntimeError("no left descent found on a positive-length element")
        return omega, tuple(word)

    def word_to_element(self, omega: ExtAffineElement, word) -> ExtAffineElement:
        out = omega
        for i in word:
            out = out * self._refl[i]
        return out

    def bfs_length(self, w: ExtAffineElement) -> int:
        """Second oracle: shortest word over the frame's simple reflections and Omega."""
        omega = self.omega_part(w)
        target = omega.inv() * w
        if target == identity_elt(self.datum):
            return 0
        dist = {identity_elt(self.datum): 0}
        frontier = [identity_elt(self.datum)]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for el in frontier:
                for r in self._refl:
                    e2 = el * r
                    if e2 not in dist:
                        dist[e2] = d
                        if e2 == target:
                            return d
                        nxt.append(e2)
            frontier = nxt
            if d > 64:
                raise RuntimeError("BFS oracle runaway")
        raise RuntimeError("BFS oracle failed to reach target")

    # -- Omega ----------------------------------------------------------------

    def omega_generators(self):
        """GeneratorInfo list: (kind, order, length-zero element)."""
        if self._omega_gens is None:
            gens = []
            for kind, order, lam in self.omega_quo.generators():
                gens.append((kind, order, self.omega_part(translation(self.datum, lam))))
            self._omega_gens = tuple(gens)
        return self._omega_gens

    def omega_coords(self, w: ExtAffineElement):
        """Coordinates of w's Omega_J-coset in X/ZR_J."""
        return self.omega_quo.coords(w.translation)

    def omega_is_finite(self) -> bool:
        return self.omega_quo.is_finite

    def omega_elements(self):
        """All of Omega_J (finite case only)."""
        if self._omega_all is None:
            if not self.omega_is_finite():
                raise ValueError("Omega_J is infinite; use generator words")
            out = []
            moduli = self.omega_quo.moduli
            def rec(prefix):
                if len(prefix) == len(moduli):
                    lam = self.omega_quo.rep(tuple(prefix), ())
                    out.append(self.omega_part(translation(self.datum, lam)))
                    return
                for c in range(moduli[len(prefix)]):
                    rec(prefix + [c])
            rec([])
            self._omega_all = tuple(sorted(out, key=lambda e: e.sort_key()))
        return self._omega_all

    def omega_word(self, w: ExtAffineElement):
        """Exponents over omega_generators for the Omega_J-part of w (its coset)."""
        gens = self.omega_generators()
        coords = [self.omega_coords(g[2]) for g in gens]
        target = self.omega_coords(w)
        e = solve_exponents(coords, target, self.omega_quo.moduli, self.omega_quo.free_rank)
        if e is None:
            raise RuntimeError("Omega coordinates unsolvable; generators do not generate")
        return e

    # -- J-positivity ----------------------------------------------------------

    def is_positive(self, w: ExtAffineElement) -> bool:
        self.require(w)
        d = self.datum
        for i in d.pos_indices:
            if i in self.rj:
                continue
            if d.pair(w.translation, d.coroots[i]) < 0:
                return False
        return True

    def is_strictly_positive_translation(self, lam) -> bool:
        """<lam, a_vee> > 0 outside R_J and = 0 inside (i.e. lam in X^+(J), J-regular)."""
        d = self.datum
        for i in d.pos_indices:
            v = d.pair(lam, d.coroots[i])
            if i in self.rj:
                if v != 0:
                    return False
            elif v <= 0:
                return False
        return True

    def x_plus_J(self, height: int):
        """Elements of X^+(J) with coordinates bounded by height, strictly J-regular ones first."""
        d = self.datum
        out = []
        rng = range(-height, height + 1)
        def rec(prefix):
            if len(prefix) == d.rank_x:
                lam = tuple(prefix)
                dom = all(d.pair(lam, d.coroots[i]) >= 0 for i in d.pos_indices)
                if dom and d.j_of(lam) == self.J:
                    out.append(lam)
                return
            for c in rng:
                rec(prefix + [c])
        rec([])
        out.sort(key=lambda lam: (sum(abs(x) for x in lam), lam))
        return out

    # -- enumeration -------------------------------------------------------------

    def affine_elements_upto(self, bound: int):
        """All of (W_J)_aff with l_J <= bound, BFS layers (also the word-length oracle)."""
        start = identity_elt(self.datum)
        dist = {start: 0}
        frontier = [start]
        d = 0
        while frontier and d < bound:
            d += 1
            nxt = []
            for el in frontier:
                for r in self._refl:
                    e2 = el * r
                    if e2 not in dist:
                        dist[e2] = d
                        nxt.append(e2)
            frontier = nxt
        return dist

    def elements_upto(self, bound: int, omega_word_bound: int | None = None):
        """All elements of W~_J with l_J <= bound; for infinite Omega_J a word bound is required."""
        aff = self.affine_elements_upto(bound)
        if self.omega_is_finite():
            omegas = self.omega_elements()
        else:
            if omega_word_bound is None:
                raise ValueError("infinite Omega_J requires omega_word_bound")
            omegas = set()
            gens = [g[2] for g in self.omega_generators()]
            frontier = {identity_elt(self.datum)}
            omegas |= frontier
            for _ in range(omega_word_bound):
                nxt = set()
                for el in frontier:
                    for g in gens:
                        for cand in (el * g, el * g.inv()):
                            if cand not in omegas:
                                nxt.add(cand)
                omegas |= nxt
                frontier = nxt
            omegas = sorted(omegas, key=lambda e: e.sort_key())
        out = {}
        for om in omegas:
            for el, dst in aff.items():
                out[om * el] = dst
        return out


_frame_cache: dict = {}


def frame(datum: BasedRootDatum, J=None) -> Frame:
    if J is None:
        J = frozenset(range(len(datum.simple_indices)))
    key = (id(datum), frozenset(J))
    if key not in _frame_cache:
        _frame_cache[key] = Frame(datum, frozenset(J))
    return _frame_cache[key]


def full_frame(datum: BasedRootDatum) -> Frame:
    return frame(datum, None)


def _interior_point(datum: BasedRootDatum):
    """A rational point p with 0 < <p, a_vee> < 1 for every positive root."""
    k = len(datum.simple_indices)
    if k == 0:
        return (Fraction(0),) * datum.rank_x
    # solve <u, alpha_i_vee> = 1 for all simples, then scale below the max coroot height
    rows = [[Fraction(sum(datum.pairing[i][j] * datum.simple_coroots[si][j]
                          for j in range(datum.rank_y))) for i in range(datum.rank_x)]
            for si in range(k)]
    rhs = [Fraction(1)] * k
    aug = [rows[i] + [rhs[i]] for i in range(k)]
    piv_rows = []
    r = 0
    for c in range(datum.rank_x):
        piv = next((i for i in range(r, k) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(k):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_rows.append(c)
        r += 1
    u = [Fraction(0)] * datum.rank_x
    for rr, c in enumerate(piv_rows):
        u[c] = aug[rr][-1]
    heights = [datum.pair(u, datum.coroots[i]) for i in datum.pos_indices]
    hmax = max(heights)
    return tuple(x / (hmax + 1) for x in u)


# ---------------------------------------------------------------------------
# datum-level operations (full frame)


def length(w: ExtAffineElement) -> int:
    return full_frame(w.datum).length(w)


def newton(w: ExtAffineElement):
    """(nu, nu_bar): the translation direction of w^{n0} and its dominant representative."""
    d = w.datum
    n0 = len(d.w0_elements)
    p = w
    for _ in range(n0 - 1):
        p = p * w
    assert p.is_translation(), "w^{n0} must be a translation"
    nu = tuple(Fraction(x, n0) for x in p.translation)
    nu_bar, _ = d.dominant_rep(nu)
    return nu, nu_bar


def is_straight(w: ExtAffineElement) -> bool:
    _, nu_bar = newton(w)
    return length(w) == w.datum.two_rho_check_pair(nu_bar)


def support(w: ExtAffineElement) -> frozenset:
    """Support as a subset of S_aff indices, closed under the Omega-part's twist."""
    fr = full_frame(w.datum)
    omega, word = fr.reduced_word(w)
    letters = set(word)
    # close under conjugation by the Omega-part
    while True:
        new = set(letters)
        for i in list(letters):
            conj = omega * fr.reflection(fr.simples[i]) * omega.inv()
            for s in fr.simples:
                if conj == fr.reflection(s):
                    new.add(s.index)
                    break
            else:
                raise RuntimeError("Omega conjugation left the simple reflections")
        if new == letters:
            return frozenset(letters)
        letters = new


def min_coset_reps_ext(datum: BasedRootDatum, J: frozenset, bound: int, side: str = "left"):
    """Minimal coset representatives in W~/W_J (or W_J\\W~), complete up to l <= bound."""
    fr = full_frame(datum)
    out = []
    for el in fr.elements_upto(bound):
        ok = True
        for si in sorted(J):
            s = ExtAffineElement(datum, (0,) * datum.rank_x, datum.simple_refl[si])
            cand = el * s if side == "left" else s * el
            if fr.length(cand) < fr.length(el):
                ok = False
                break
        if ok:
            out.append(el)
    out.sort(key=lambda e: (fr.length(e),) + e.sort_key())
    return out
