"""Cyclic-shift machinery on W~(1) and the cocenter of the q = 0 algebra.

The elementary moves are conjugations by lifted simple reflections (length
non-increasing), by Z-elements and by Omega(1) generators (length-preserving).
A plateau is the closure of an element under the length-preserving moves; by
the minimal-length theory, a non-minimal element always admits a strict
descent somewhere on its plateau, so: explore the plateau, descend when
possible, and stop at a plateau with no descents. The descent step in the
algebra is

    T_x = T_{x s^-1} T_s == T_s T_{x s^-1} = sum_z a_z T_{z x s^-1}   (q = 0)

with c_s = sum_z a_z z, which strictly lowers length; iterating lands every
T_x on the span of (T_w), w minimal, supported on canonical class
representatives (lexicographically least member).

Standard quadruples (J, x, Gamma, C) are extracted per class by searching for
a standard representative w*y (w in a finite W_K'(1), y straight and K'-bi-
minimal, normalizing K'(1)) and applying the h-conjugation recipe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .affine import ExtAffineElement, frame as get_frame, full_frame, identity_elt, newton, is_straight, support
from .cover import CoverSpec, ProPElement, identity_p, lift, z_elt
from .errors import SearchBudget
from .hecke import HeckeAlgebra, HeckeElement


# ---------------------------------------------------------------------------
# elementary conjugation moves


def _conjugators(cover: CoverSpec):
    fr = cover.frame
    out = []
    for s in fr.simples:
        out.append(lift(cover, fr.reflection(s)))
    for z in cover.z.generators():
        out.append(z_elt(cover, z))
    for _, _, om in fr.omega_generators():
        out.append(lift(cover, om))
        out.append(lift(cover, om.inv()))
    return out


@dataclass
class ShiftStep:
    conjugator: ProPElement
    length_after: int


@dataclass
class ShiftPath:
    """Replayable certificate: target = (prod of conjugators) source (prod)^-1."""

    source: ProPElement
    steps: list

    def replay(self) -> ProPElement:
        cur = self.source
        for st in self.steps:
            cur = st.conjugator * cur * st.conjugator.inv()
            assert cur.length == st.length_after, "path length bookkeeping broken"
        return cur


class CyclicShift:
    """Search driver bound to one cover; memoizes plateaus and class data."""

    def __init__(self, cover: CoverSpec, budget: int = 200_000):
        self.cover = cover
        self.frame = cover.frame
        self.budget = budget
        self.conjugators = _conjugators(cover)
        self._class_cache: dict[ProPElement, tuple] = {}

    def plateau(self, w: ProPElement):
        """Closure under length-preserving conjugation; parents for path replay."""
        ln = w.length
        seen = {w: None}
        frontier = [w]
        count = 0
        while frontier:
            nxt = []
            for el in frontier:
                for g in self.conjugators:
                    e2 = g * el * g.inv()
                    if e2.length == ln and e2 not in seen:
                        seen[e2] = (el, g)
                        nxt.append(e2)
                        count += 1
                        if count > self.budget:
                            raise SearchBudget("plateau closure exceeded budget")
            frontier = nxt
        return seen

    def _descent(self, plateau_map):
        """(element, conjugator) with a strict length drop, or None."""
        fr = self.frame
        for el in sorted(plateau_map, key=lambda t: t.sort_key()):
            for g in self.conjugators:
                e2 = g * el * g.inv()
                if e2.length < el.length:
                    return el, g
        return None

    def _path_to(self, plateau_map, target: ProPElement, base_path):
        chain = []
        cur = target
        while plateau_map[cur] is not None:
            parent, g = plateau_map[cur]
            chain.append(ShiftStep(g, cur.length))
            cur = parent
        return base_path + list(reversed(chain))

    def reduce_to_min(self, w: ProPElement):
        """(w_min, path) with w_min of minimal length in the conjugacy class of w."""
        path: list = []
        cur = w
        while True:
            plat = self.plateau(cur)
            found = self._descent(plat)
            if found is None:
                reps = min(plat, key=lambda t: t.sort_key())
                path = self._path_to(plat, reps, path)
                return reps, ShiftPath(w, path)
            el, g = found
            path = self._path_to(plat, el, path)
            cur = g * el * g.inv()
            path.append(ShiftStep(g, cur.length))

    def is_minimal(self, w: ProPElement) -> bool:
        return self.reduce_to_min(w)[0].length == w.length

    def cyc_class(self, w_min: ProPElement):
        """Sorted members of the cyclic-shift class of a minimal element."""
        plat = self.plateau(w_min)
        return tuple(sorted(plat, key=lambda t: t.sort_key()))

    def canonical_rep(self, w_min: ProPElement) -> ProPElement:
        return self.cyc_class(w_min)[0]


# ---------------------------------------------------------------------------
# cocenter reduction


@dataclass
class CocenterVector:
    """Finite map canonical minimal representative -> scalar."""

    algebra: HeckeAlgebra
    coeffs: dict

    def lift(self) -> HeckeElement:
        return HeckeElement(self.algebra, dict(self.coeffs))

    def __eq__(self, other):
        return isinstance(other, CocenterVector) and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = [f"({c!r})*[{w!r}]" for w, c in sorted(
            self.coeffs.items(), key=lambda t: (t[0].length, t[0].sort_key()))]
        return " + ".join(bits)


def cocenter_reduce(alg: HeckeAlgebra, e: HeckeElement, shift: CyclicShift | None = None) -> CocenterVector:
    """Image of e in the cocenter, on canonical minimal representatives. q = 0 only."""
    if alg.mode != "q0":
        raise ValueError("cocenter reduction is a q = 0 operation")
    shift = shift or CyclicShift(alg.cover)
    out: dict = {}
    work = list(e.items())
    while work:
        w, c = work.pop()
        if not c:
            continue
        plat = shift.plateau(w)
        found = shift._descent(plat)
        if found is None:
            rep = min(plat, key=lambda t: t.sort_key())
            cur = out.get(rep)
            out[rep] = c if cur is None else cur + c
            continue
        el, g = found
        # T_w == T_el (plateau), then the strict descent: T_el == sum_z a_z T_{z el s^-1}
        s = g
        shorter = el * s.inv()
        for z, a in alg.c_dict(s).items():
            work.append((z_elt(alg.cover, z) * shorter, c * a))
    return CocenterVector(alg, {w: c for w, c in out.items() if c})


# ---------------------------------------------------------------------------
# standard quadruples


@dataclass
class StandardQuadruple:
    J: frozenset                 # subset of the datum's simple indices
    x_bar: ExtAffineElement      # element of Omega_J
    gamma: frozenset             # indices into frame(J).simples
    cls: tuple                   # Ad(x_bar)-twisted class in W_Gamma, sorted

    def sort_key(self):
        return (tuple(sorted(self.J)), self.x_bar.sort_key(), tuple(sorted(self.gamma)),
                tuple(c.sort_key() for c in self.cls))


@dataclass
class StandardWitness:
    k_prime: frozenset           # indices into the ambient S_aff
    w: ProPElement
    y: ProPElement
    h: ProPElement
    member: ProPElement          # the class member equal to w * y


@dataclass
class MinClass:
    rep: ProPElement
    members: tuple
    quadruple: StandardQuadruple
    witness: StandardWitness
    pair: tuple                  # (J, Gamma) = (frozenset simple idx, frozenset J_aff idx)
    rigid: bool


def _finite_type_subsets(cover: CoverSpec):
    """Subsets of S_aff with finite W_K: those missing a node of each affine component."""
    fr = cover.frame
    n = len(fr.simples)
    comps = []
    # nodes grouped by the affine component they belong to (classical ones join
    # the component of their affine node through the datum component structure)
    datum_comps = cover.datum.components(fr.J)
    for ci, comp in enumerate(datum_comps):
        nodes = {ci}  # affine node index in fr.simples
        for k, si in fr.classical_of.items():
            if si in comp:
                nodes.add(k)
        comps.append(nodes)
    out = []
    for mask in range(1 << n):
        K = frozenset(i for i in range(n) if mask >> i & 1)
        if all(not c <= K for c in comps):
            out.append(K)
    out.sort(key=lambda K: (len(K), tuple(sorted(K))))
    return out


def _w_k_elements(cover: CoverSpec, K: frozenset):
    """The finite group W_K inside W~, as ExtAffineElements."""
    fr = cover.frame
    gens = [fr.reflection(fr.simples[i]) for i in sorted(K)]
    seen = {identity_elt(cover.datum)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for el in frontier:
            for g in gens:
                e2 = el * g
                if e2 not in seen:
                    seen.add(e2)
                    nxt.append(e2)
        frontier = nxt
        if len(seen) > 10_000:
            raise SearchBudget("W_K enumeration exceeded cap; K not finite type?")
    return tuple(sorted(seen, key=lambda e: e.sort_key()))


def _reflections_of(cover: CoverSpec, K: frozenset):
    fr = cover.frame
    return frozenset(fr.reflection(fr.simples[i]) for i in K)


def standard_decomposition(alg: HeckeAlgebra, shift: CyclicShift, w_min: ProPElement):
    """Search the class of w_min for a standard representative; returns (quadruple, witness)."""
    cover = alg.cover
    fr = cover.frame
    d = alg.datum
    members = shift.cyc_class(w_min)
    for K in _finite_type_subsets(cover):
        k_refl = _reflections_of(cover, K)
        wk = _w_k_elements(cover, K)
        wk_lifts = [ProPElement(cover, z, el) for el in wk for z in cover.z.elements()]
        for m in members:
            for wcand in wk_lifts:
                y = wcand.inv() * m
                if not is_straight(y.base):
                    continue
                ly = fr.length(y.base)
                if any(fr.length((r * y.base)) <= ly or fr.length((y.base * r)) <= ly
                       for r in k_refl):
                    continue
                if frozenset(y.base * r * y.base.inv() for r in k_refl) != k_refl:
                    continue
                quad, wit = _quadruple_from(alg, K, wcand, y, m)
                if quad is not None:
                    return quad, wit
    raise SearchBudget(f"no standard representative found for {w_min!r}")


def _quadruple_from(alg: HeckeAlgebra, K: frozenset, w: ProPElement, y: ProPElement,
                    member: ProPElement):
    cover = alg.cover
    fr = cover.frame
    d = alg.datum
    nu, nu_bar = newton(y.base)
    J = frozenset(d.j_of(nu_bar))
    # K closed up under Ad(pi(y)); stays inside the finite W_K' world
    letters = set(support(w.base))
    k_set = frozenset(fr.reflection(fr.simples[i]) for i in letters)
    while True:
        grown = set(k_set)
        for r in k_set:
            grown.add(y.base * r * y.base.inv())
            grown.add(y.base.inv() * r * y.base)
        grown = frozenset(grown)
        if grown == k_set:
            break
        k_set = grown
        if len(k_set) > len(fr.simples):
            return None, None
    # all elements of k_set must be simple reflections of S_aff
    simple_refls = {fr.reflection(s): s.index for s in fr.simples}
    if not all(r in simple_refls for r in k_set):
        return None, None
    # h in ^J W0(1) with h(nu_y) = nu_bar
    h0 = None
    for cand in d.min_coset_reps_w0(J, side="right"):
        if tuple(Fraction(x) for x in cand.apply(tuple(nu))) == tuple(nu_bar):
            h0 = cand
            break
    if h0 is None:
        return None, None
    h = lift(cover, ExtAffineElement(d, (0,) * d.rank_x, h0))
    x = h * y * h.inv()
    jframe = get_frame(d, J)
    # Gamma = pi(h) K pi(h)^-1 must consist of simple reflections of (W_J)_aff
    jsimple_refls = {jframe.reflection(s): s.index for s in jframe.simples}
    gamma_idx = set()
    for r in k_set:
        rr = h.base * r * h.base.inv()
        if rr not in jsimple_refls:
            return None, None
        gamma_idx.add(jsimple_refls[rr])
    gamma = frozenset(gamma_idx)
    xb = x.base
    # Ad(x_bar) must stabilize Gamma
    gamma_refl = {jframe.reflection(jframe.simples[i]) for i in gamma}
    if frozenset(xb * r * xb.inv() for r in gamma_refl) != frozenset(gamma_refl):
        return None, None
    if not jframe.contains(xb) or jframe.length(xb) != 0:
        return None, None
    # twisted class of pi(h w h^-1) in W_Gamma
    c0 = (h * w * h.inv()).base
    wgam = _group_closure([jframe.reflection(jframe.simples[i]) for i in gamma], d)
    if c0 not in wgam:
        return None, None
    cls = _twisted_class(c0, wgam, xb)
    if not _is_elliptic(d, jframe, gamma, cls, xb):
        return None, None
    quad = StandardQuadruple(J=J, x_bar=xb, gamma=gamma, cls=cls)
    wit = StandardWitness(k_prime=K, w=w, y=y, h=h, member=member)
    return quad, wit


def _group_closure(gens, d):
    seen = {identity_elt(d)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for el in frontier:
            for g in gens:
                e2 = el * g
                if e2 not in seen:
                    seen.add(e2)
                    nxt.append(e2)
        frontier = nxt
    return seen


def _twisted_class(c0: ExtAffineElement, group, xb: ExtAffineElement):
    """Orbit of c0 under c -> u c (xb u xb^-1)^-1 for u in the group."""
    seen = {c0}
    frontier = [c0]
    while frontier:
        nxt = []
        for c in frontier:
            for u in group:
                c2 = u * c * (xb * u * xb.inv()).inv()
                if c2 not in seen:
                    seen.add(c2)
                    nxt.append(c2)
        frontier = nxt
    return tuple(sorted(seen, key=lambda e: e.sort_key()))


def _is_elliptic(d, jframe, gamma: frozenset, cls, xb: ExtAffineElement) -> bool:
    """C is elliptic iff it is contained in no proper Ad(xb)-stable W_{Gamma'}."""
    for sub in _proper_subsets(gamma):
        refl = {jframe.reflection(jframe.simples[i]) for i in sub}
        if frozenset(xb * r * xb.inv() for r in refl) != frozenset(refl):
            continue
        wsub = _group_closure(list(refl), d)
        if all(c in wsub for c in cls):
            return False
    return True


def _proper_subsets(s: frozenset):
    items = sorted(s)
    n = len(items)
    for mask in range(1 << n):
        if mask == (1 << n) - 1:
            continue
        yield frozenset(items[i] for i in range(n) if mask >> i & 1)


def quadruples_strongly_equivalent(d, q1: StandardQuadruple, q2: StandardQuadruple) -> bool:
    """Equivalence under conjugation by Omega_J (which fixes x_bar; Omega_J is abelian)."""
    if q1.J != q2.J or q1.x_bar != q2.x_bar:
        return False
    jframe = get_frame(d, q1.J)
    targets = {(q2.gamma, q2.cls)}
    seen = {(q1.gamma, q1.cls)}
    frontier = [(q1.gamma, q1.cls)]
    gens = []
    for _, _, om in jframe.omega_generators():
        gens.extend([om, om.inv()])
    refl_index = {jframe.reflection(s): s.index for s in jframe.simples}
    while frontier:
        nxt = []
        for gamma, cls in frontier:
            if (gamma, cls) in targets:
                return True
            for om in gens:
                g2 = frozenset(refl_index[om * jframe.reflection(jframe.simples[i]) * om.inv()]
                               for i in gamma)
                c2 = tuple(sorted((om * c * om.inv() for c in cls), key=lambda e: e.sort_key()))
                if (g2, c2) not in seen:
                    seen.add((g2, c2))
                    nxt.append((g2, c2))
        frontier = nxt
    return (q2.gamma, q2.cls) in seen


# ---------------------------------------------------------------------------
# class tables and the rigid / non-rigid split


def classify_part(w_min: ProPElement) -> str:
    """'rigid' when the Newton point is W0-central (pairs to 0 with every coroot)."""
    d = w_min.base.datum
    _, nu_bar = newton(w_min.base)
    central = all(d.pair(nu_bar, d.coroots[i]) == 0 for i in d.pos_indices)
    return "rigid" if central else "nonrigid"


def min_class_table(alg: HeckeAlgebra, bound: int, shift: CyclicShift | None = None):
    """All cyclic-shift classes of minimal elements with length <= bound."""
    shift = shift or CyclicShift(alg.cover)
    fr = alg.cover.frame
    pool = []
    for base, ln in sorted(fr.elements_upto(bound).items(), key=lambda kv: (kv[1],) + kv[0].sort_key()):
        for z in alg.cover.z.elements():
            pool.append(ProPElement(alg.cover, z, base))
    seen = set()
    classes = []
    for w in pool:
        if w in seen:
            continue
        plat = shift.plateau(w)
        if shift._descent(plat) is not None:
            seen |= set(plat)
            continue
        members = tuple(sorted(plat, key=lambda t: t.sort_key()))
        seen |= set(members)
        quad, wit = standard_decomposition(alg, shift, members[0])
        jframe = get_frame(alg.datum, quad.J)
        classes.append(MinClass(
            rep=members[0],
            members=members,
            quadruple=quad,
            witness=wit,
            pair=(quad.J, quad.gamma),
            rigid=classify_part(members[0]) == "rigid",
        ))
    classes.sort(key=lambda c: (c.rep.length,) + c.rep.sort_key())
    return classes


def nss_span_sample(alg: HeckeAlgebra, bound: int, shift: CyclicShift | None = None):
    """T_w and iota(T_w) for nonrigid minimal canonical representatives, l <= bound."""
    from .bernstein import iota

    out = []
    for cls in min_class_table(alg, bound, shift):
        if not cls.rigid:
            t = alg.basis(cls.rep)
            out.append(t)
            out.append(iota(t))
    return out
