"""The extension 1 -> Z -> W~(1) -> W~ -> 1 with its bullet action and twisted multiplication.

An element is a pair (z, w) meaning z * L(w), where L is the canonical section:
L(w) = L(omega) * s_{i1}^ * ... * s_{ik}^ along the canonical reduced word, with
fixed generator lifts. Two cover shapes are supported:

* split covers: any Omega, any action of W~ on Z; multiplication is the plain
  semidirect-product formula.
* twisted covers (cyclic or trivial Omega): the chosen lifts satisfy the braid
  relations exactly (as Iwahori-Matsumoto lifts do in pro-p Iwahori-Weyl groups
  of p-adic groups), and the twist data is finite: squares s^2 in Z, the power
  tau^m in Z of the Omega generator, and conjugation twists tau s tau^-1.

Braid-exactness makes L multiplicative along reduced words, so products fold
one generator at a time with Z-corrections only at quadratic, Omega-power and
conjugation events. The abstract 2-cocycle sigma(a, b) = L(a) L(b) L(ab)^-1 is
a derived operation, validated on sampled triples.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .affine import ExtAffineElement, Frame, full_frame, identity_elt
from .errors import CoverInvalid, CoverMismatch
from .rootdata import BasedRootDatum

ZElt = tuple


@dataclass(frozen=True)
class FiniteAbelianGroup:
    moduli: tuple

    @property
    def order(self) -> int:
        out = 1
        for m in self.moduli:
            out *= m
        return out

    @property
    def zero(self) -> ZElt:
        return (0,) * len(self.moduli)

    def reduce(self, z) -> ZElt:
        return tuple(c % m for c, m in zip(z, self.moduli))

    def add(self, a: ZElt, b: ZElt) -> ZElt:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a: ZElt) -> ZElt:
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    def elements(self):
        return [tuple(t) for t in itertools.product(*[range(m) for m in self.moduli])]

    def generators(self):
        out = []
        for i in range(len(self.moduli)):
            out.append(tuple(1 if j == i else 0 for j in range(len(self.moduli))))
        return out


TRIVIAL_Z = FiniteAbelianGroup(())


class CoverSpec:
    """Validated description of the extension; immutable after construction.

    action: dict mapping ('s', simple_index) / ('omega', gen_index) to integer
    matrices acting on Z-coordinates (identity when absent).
    Twist tables (all zero for the split extension):
      quad[i]      = s_i^ squared, an element of Z
      omega_pow    = tau^m for the torsion Omega generator (cyclic Omega only)
      conj[(g, i)] = the Z-part of tau_g s_i^ tau_g^-1 relative to the lift of
                     the conjugated simple reflection
    """

    def __init__(self, datum: BasedRootDatum, z: FiniteAbelianGroup, action=None,
                 quad=None, omega_pow=None, conj=None, name="split"):
        self.datum = datum
        self.z = z
        self.frame = full_frame(datum)
        self.name = name
        self.action = dict(action or {})
        self.quad = {int(k): z.reduce(v) for k, v in (quad or {}).items()}
        self.omega_pow = z.reduce(omega_pow) if omega_pow is not None else None
        self.conj = {(int(g), int(i)): z.reduce(v) for (g, i), v in (conj or {}).items()}
        self.is_split = not self.quad and self.omega_pow is None and not self.conj
        self._act_cache = {}
        ogens = self.frame.omega_generators()
        if not self.is_split:
            if len(ogens) > 1:
                raise CoverInvalid("twisted covers are supported for cyclic Omega only")
        self._validate_action()
        self._perm_cache = {}

    # -- the bullet action ---------------------------------------------------

    def _act_matrix(self, key):
        k = len(self.z.moduli)
        m = self.action.get(key)
        if m is None:
            return tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))
        return tuple(tuple(int(x) for x in row) for row in m)

    def _validate_action(self):
        k = len(self.z.moduli)
        for key, m in self.action.items():
            if len(m) != k or any(len(r) != k for r in m):
                raise CoverInvalid(f"action matrix for {key} has wrong shape")
            # columns must respect the moduli: m_j * A e_j == 0 in Z
            for j in range(k):
                col = [m[i][j] * self.z.moduli[j] for i in range(k)]
                if any(c % mod != 0 for c, mod in zip(col, self.z.moduli)):
                    raise CoverInvalid(f"action matrix for {key} does not preserve Z")

    def _apply_matrix(self, mat, z: ZElt) -> ZElt:
        k = len(self.z.moduli)
        return self.z.reduce(tuple(sum(mat[i][j] * z[j] for j in range(k)) for i in range(k)))

    def act(self, w: ExtAffineElement, z: ZElt) -> ZElt:
        """w bullet z, evaluated along the canonical decomposition of w."""
        if not self.action or not self.z.moduli:
            return z
        key = (w.translation, w.fin.xmat)
        mats = self._act_cache.get(key)
        if mats is None:
            omega, word = self.frame.reduced_word(w)
            exps = self.frame.omega_word(omega)
            seq = []
            for g, e in enumerate(exps):
                mat = self._act_matrix(("omega", g))
                seq.extend([mat] * abs(e) if e >= 0 else [_matinv_mod(mat, self.z.moduli)] * (-e))
            for i in word:
                seq.append(self._act_matrix(("s", i)))
            mats = seq
            self._act_cache[key] = mats
        out = z
        for mat in reversed(mats):
            out = self._apply_matrix(mat, out)
        return out

    # -- simple-reflection conjugation data for the twisted fold --------------

    def omega_gen(self) -> ExtAffineElement | None:
        gens = self.frame.omega_generators()
        return gens[0][2] if gens else None

    def omega_order(self) -> int:
        gens = self.frame.omega_generators()
        if not gens:
            return 1
        kind, order, _ = gens[0]
        return order if kind == "torsion" else 0

    def simple_perm_under_omega(self, power: int = 1):
        """Permutation of S_aff induced by conjugation with tau^power."""
        key = power
        if key in self._perm_cache:
            return self._perm_cache[key]
        fr = self.frame
        tau = self.omega_gen()
        t = tau
        if power < 0:
            t = tau.inv()
            power = -power
        perm = list(range(len(fr.simples)))
        if tau is not None and power:
            one = {}
            for s in fr.simples:
                conj = t * fr.reflection(s) * t.inv()
                for s2 in fr.simples:
                    if conj == fr.reflection(s2):
                        one[s.index] = s2.index
                        break
                else:
                    raise CoverInvalid("Omega conjugation does not stabilize S_aff")
            perm = list(range(len(fr.simples)))
            for _ in range(power):
                perm = [one[p] for p in perm]
        self._perm_cache[key] = tuple(perm)
        return tuple(perm)

    def __repr__(self):
        return f"CoverSpec({self.name}, Z={self.z.moduli}, split={self.is_split})"


def _matinv_mod(mat, moduli):
    """Inverse of an action matrix modulo the moduli (search by power; orders are tiny)."""
    k = len(moduli)
    ident = tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))
    cur = tuple(tuple(r) for r in mat)
    prev = ident
    for _ in range(1, 10_000):
        nxt = tuple(
            tuple(sum(cur[i][t] * mat[t][j] for t in range(k)) % _lcm_all(moduli) for j in range(k))
            for i in range(k)
        )
        if _normalize_mat(nxt, moduli) == _normalize_mat(ident, moduli):
            return cur
        prev, cur = cur, nxt
    raise CoverInvalid("action matrix is not invertible mod Z")


def _lcm_all(moduli):
    import math

    out = 1
    for m in moduli:
        out = out * m // math.gcd(out, m)
    return max(out, 1)


def _normalize_mat(mat, moduli):
    return tuple(tuple(mat[i][j] % moduli[i] for j in range(len(moduli))) for i in range(len(moduli)))


class ProPElement:
    """z * L(base) for z in Z and base in W~."""

    __slots__ = ("cover", "z", "base", "_hash")

    def __init__(self, cover: CoverSpec, z: ZElt, base: ExtAffineElement):
        self.cover = cover
        self.z = cover.z.reduce(z)
        self.base = base
        self._hash = hash((self.z, base))

    def __eq__(self, other):
        return (isinstance(other, ProPElement) and self.cover is other.cover
                and self.z == other.z and self.base == other.base)

    def __hash__(self):
        return self._hash

    @property
    def length(self) -> int:
        return self.cover.frame.length(self.base)

    def sort_key(self):
        return (self.z, self.base.sort_key())

    def __repr__(self):
        if self.cover.z.moduli:
            return f"[{','.join(map(str, self.z))}]{self.base!r}"
        return repr(self.base)

    def __mul__(self, other: "ProPElement") -> "ProPElement":
        if self.cover is not other.cover:
            raise CoverMismatch("elements from different covers")
        cov = self.cover
        z = cov.z.add(self.z, cov.act(self.base, other.z))
        if cov.is_split:
            return ProPElement(cov, z, self.base * other.base)
        pair = _fold(cov, (z, self.base), other.base)
        return ProPElement(cov, pair[0], pair[1])

    def inv(self) -> "ProPElement":
        cov = self.cover
        binv = self.base.inv()
        if cov.is_split:
            return ProPElement(cov, cov.z.neg(cov.act(binv, self.z)), binv)
        # solve (a, binv)(z, base) = (0, 1)
        sig = _fold(cov, (cov.z.zero, binv), self.base)[0]
        a = cov.z.neg(cov.z.add(cov.act(binv, self.z), sig))
        return ProPElement(cov, a, binv)

    def conj_by(self, g: "ProPElement") -> "ProPElement":
        return g * self * g.inv()


def _fold(cov: CoverSpec, pair, rhs: ExtAffineElement):
    """Multiply the pair (z, w) by L(rhs), one canonical generator at a time."""
    fr = cov.frame
    omega, word = fr.reduced_word(rhs)
    exps = fr.omega_word(omega)
    z, w = pair
    if exps and exps[0]:
        e = exps[0]
        order = cov.omega_order()
        if order:
            e %= order
        for _ in range(abs(e)):
            z, w = _rmul_omega(cov, z, w, 1 if e > 0 else -1)
    for i in word:
        z, w = _rmul_simple(cov, z, w, i)
    return z, w


def _rmul_simple(cov: CoverSpec, z: ZElt, w: ExtAffineElement, i: int):
    fr = cov.frame
    s = fr.reflection(fr.simples[i])
    ws = w * s
    if fr.length(ws) > fr.length(w):
        return z, ws
    # L(w) s^ = (ws . quad_i) L(ws) since L(w) = L(ws) s^ and s^2 = quad_i
    quad = cov.quad.get(i, cov.z.zero)
    return cov.z.add(z, cov.act(ws, quad)), ws


def _rmul_omega(cov: CoverSpec, z: ZElt, w: ExtAffineElement, sign: int):
    """(z, w) * tau^sign for the cyclic Omega generator tau.

    Writes L(w) tau^sign = (tau^e . C) (tau^f' . wrap*zpow) L(w tau^sign) where
    C collects the conjugation twists pushed through the affine word and the
    zpow term absorbs an Omega-exponent wraparound tau^m = zpow.
    """
    fr = cov.frame
    tau = cov.omega_gen()
    if tau is None:
        return z, w
    order = cov.omega_order()
    omega, word = fr.reduced_word(w)
    exps = fr.omega_word(omega)
    e = exps[0] if exps else 0
    if order:
        e %= order
    perm = cov.simple_perm_under_omega(1)
    pinv = tuple(perm.index(t) for t in range(len(perm)))
    tau_inv = tau.inv()
    # push tau^sign left through the word, right to left:
    #   s_j tau     = (-zeta_{p^-1(j)})      tau     s_{p^-1(j)}
    #   s_j tau^-1  = (tau^-1 . zeta_j)      tau^-1  s_{p(j)}
    c = cov.z.zero
    for t in range(len(word) - 1, -1, -1):
        j = word[t]
        if sign > 0:
            corr = cov.z.neg(cov.conj.get((0, pinv[j]), cov.z.zero))
        else:
            corr = cov.act(tau_inv, cov.conj.get((0, j), cov.z.zero))
        s_elt = fr.reflection(fr.simples[j])
        c = cov.z.add(cov.act(s_elt, c), corr)
    f = e + sign
    zpow_term = cov.z.zero
    if order:
        f_prime = f % order
        wrap = (f - f_prime) // order
        if wrap and cov.omega_pow is not None:
            acc = cov.z.zero
            for _ in range(abs(wrap)):
                acc = cov.z.add(acc, cov.omega_pow if wrap > 0 else cov.z.neg(cov.omega_pow))
            zpow_term = cov.act(_omega_power_elt(fr, tau, f_prime), acc)
        f = f_prime
    head = _omega_power_elt(fr, tau, e)
    ztot = cov.z.add(cov.act(head, c), zpow_term)
    t_elt = tau if sign > 0 else tau_inv
    return cov.z.add(z, ztot), w * t_elt


def _omega_power_elt(fr: Frame, tau: ExtAffineElement, e: int):
    out = identity_elt(fr.datum)
    t = tau if e >= 0 else tau.inv()
    for _ in range(abs(e)):
        out = out * t
    return out


# ---------------------------------------------------------------------------
# public construction and operations


def split_cover(datum: BasedRootDatum, moduli=(), action=None, name=None) -> CoverSpec:
    z = FiniteAbelianGroup(tuple(moduli))
    return CoverSpec(datum, z, action=action, name=name or ("trivial" if not moduli else "split"))


def trivial_cover(datum: BasedRootDatum) -> CoverSpec:
    return split_cover(datum, ())


def lift(cover: CoverSpec, w: ExtAffineElement, z=None) -> ProPElement:
    return ProPElement(cover, z if z is not None else cover.z.zero, w)


def lifts_of(cover: CoverSpec, w: ExtAffineElement):
    """All |Z| lifts of w, in a canonical order."""
    return [ProPElement(cover, z, w) for z in cover.z.elements()]


def z_elt(cover: CoverSpec, z: ZElt) -> ProPElement:
    return ProPElement(cover, z, identity_elt(cover.datum))


def identity_p(cover: CoverSpec) -> ProPElement:
    return z_elt(cover, cover.z.zero)


def mul(a: ProPElement, b: ProPElement) -> ProPElement:
    return a * b


def conjugate(g: ProPElement, w: ProPElement) -> ProPElement:
    return w.conj_by(g)


def sigma(cover: CoverSpec, a: ExtAffineElement, b: ExtAffineElement) -> ZElt:
    """The 2-cocycle L(a) L(b) L(ab)^-1 attached to the canonical section."""
    prod = lift(cover, a) * lift(cover, b)
    return prod.z


def validate_cover(cover: CoverSpec, samples: int = 60, seed: int = 0, length_bound: int = 4):
    """Sampled checks: cocycle condition, pi a homomorphism, length inflation, associativity."""
    rng = random.Random(seed)
    fr = cover.frame
    pool = sorted(fr.elements_upto(length_bound, omega_word_bound=2).keys(),
                  key=lambda e: e.sort_key())
    zs = cover.z.elements()
    for _ in range(samples):
        a, b, c = (rng.choice(pool) for _ in range(3))
        za, zb, zc = (rng.choice(zs) if zs else () for _ in range(3))
        pa = ProPElement(cover, za, a) if zs else lift(cover, a)
        pb = ProPElement(cover, zb, b) if zs else lift(cover, b)
        pc = ProPElement(cover, zc, c) if zs else lift(cover, c)
        if (pa * pb).base != a * b:
            raise CoverInvalid("projection is not a homomorphism")
        if ((pa * pb) * pc) != (pa * (pb * pc)):
            raise CoverInvalid("multiplication is not associative")
        if (pa * pa.inv()) != identity_p(cover):
            raise CoverInvalid("inverse fails")
        # cocycle condition (a . sigma(b,c)) + sigma(a, bc) = sigma(a,b) + sigma(ab, c)
        lhs = cover.z.add(cover.act(a, sigma(cover, b, c)), sigma(cover, a, b * c))
        rhs = cover.z.add(sigma(cover, a, b), sigma(cover, a * b, c))
        if lhs != rhs:
            raise CoverInvalid("cocycle condition fails")
    return True
