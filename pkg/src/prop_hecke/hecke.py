"""The algebra on basis (T_w), w in W~_J(1): braid and quadratic relations, exact scalars.

One implementation covers the full algebra and every parabolic subalgebra: an
algebra handle carries a subset J of the simple reflections and works with the
frame of W~_J (lengths l_J, simples J_aff, Omega_J). The full algebra is J = S0.
Multiplication folds the right factor one canonical generator at a time:

    T_x T_z     = T_{xz}                 (z in Z, length 0)
    T_x T_omega = T_{x omega}            (length 0)
    T_x T_t     = T_{xt}                 if l_J(xt) > l_J(x)
    T_x T_t     = q_t T_{xt} + sum_z a_z T_{xz}   otherwise, c_t = sum_z a_z z

The last rule is the quadratic relation pushed through a braid factorization;
the bullet-invariance of c_t collapses the twisted sum to plain Z-shifts.
Parameters c_t live in k[Z] (dicts Z-element -> scalar), are given on chosen
lifts of the ambient S_aff, and extend to every reflection lift by Z-shifts
and conjugation equivariance.

In 'generic' mode scalars are rational functions in q and every q_t is the
single formal parameter q; in 'q0' mode q_t = 0.
"""

from __future__ import annotations

import json

from .affine import ExtAffineElement, Frame, frame as get_frame, full_frame, identity_elt
from .cover import CoverSpec, ProPElement, ZElt, identity_p, lift, z_elt
from .errors import AlgebraMismatch, NotPositive, ParamInvalid, SearchBudget
from .rootdata import BasedRootDatum
from .scalars import BaseField, RationalFunctionField


# ---------------------------------------------------------------------------
# k[Z] helpers: dicts Z-element -> scalar, no explicit zeros


def kz_clean(d):
    return {z: c for z, c in d.items() if c}

def kz_add(a, b):
    out = dict(a)
    for z, c in b.items():
        cur = out.get(z)
        out[z] = c if cur is None else cur + c
    return kz_clean(out)

def kz_scale(a, f):
    return kz_clean({z: c * f for z, c in a.items()})

def kz_shift(cover: CoverSpec, a, z0: ZElt):
    """a * z0 in k[Z]."""
    return {cover.z.add(z, z0): c for z, c in a.items()}

def kz_bullet(cover: CoverSpec, w: ExtAffineElement, a):
    """w bullet a: permute Z through the action."""
    return {cover.act(w, z): c for z, c in a.items()}

def kz_equal(a, b):
    return kz_clean(a) == kz_clean(b)


class ParamSet:
    """Chosen lifts t^ = (0, t) of the ambient S_aff with c_{t^} in k[Z].

    c extends to arbitrary reflection lifts via c_{tz} = c_t z and
    c_{w t w^-1} = w bullet c_t; the extension is computed through a conjugation
    witness found by orbit search and validated for consistency.
    """

    def __init__(self, cover: CoverSpec, field: BaseField, c_table, label="custom"):
        self.cover = cover
        self.field = field
        self.label = label
        fr = cover.frame
        self.c_table = {}
        for i, s in enumerate(fr.simples):
            c = c_table[i] if not isinstance(c_table, dict) else c_table[i]
            self.c_table[i] = kz_clean({cover.z.reduce(z): v for z, v in c.items()})
        self._c_cache = {}
        self._witness_cache = {}

    def c_of(self, t: ProPElement):
        """c_{t} for any lift of a reflection of the ambient affine Weyl group."""
        key = t
        out = self._c_cache.get(key)
        if out is not None:
            return out
        cov = self.cover
        fr = cov.frame
        w, si = self._witness(t.base)
        base_lift = lift(cov, fr.reflection(fr.simples[si]))
        w_lift = lift(cov, w)
        conj = w_lift * base_lift * w_lift.inv()
        z0 = (conj.inv() * t)
        if z0.base != identity_elt(cov.datum):
            raise ParamInvalid("witness conjugation does not reach the element")
        c = kz_bullet(cov, w, self.c_table[si])
        c = kz_shift(cov, c, z0.z)
        self._c_cache[key] = c
        return c

    def _witness(self, r: ExtAffineElement):
        """(w, simple index) with w s w^-1 = r at the level of W~."""
        if r in self._witness_cache:
            return self._witness_cache[r]
        cov = self.cover
        fr = cov.frame
        start = {}
        for s in fr.simples:
            start[fr.reflection(s)] = (identity_elt(cov.datum), s.index)
        gens = [fr.reflection(s) for s in fr.simples]
        for kind, order, om in fr.omega_generators():
            gens.append(om)
            gens.append(om.inv())
        seen = dict(start)
        frontier = list(start.keys())
        budget = 50_000
        while frontier:
            if r in seen:
                self._witness_cache[r] = seen[r]
                return seen[r]
            nxt = []
            for refl in frontier:
                w0, si = seen[refl]
                for g in gens:
                    r2 = g * refl * g.inv()
                    if r2 not in seen:
                        seen[r2] = (g * w0, si)
                        nxt.append(r2)
                        budget -= 1
                        if budget <= 0:
                            raise SearchBudget("reflection witness search exceeded budget")
            frontier = nxt
        if r in seen:
            self._witness_cache[r] = seen[r]
            return seen[r]
        raise ParamInvalid(f"{r!r} is not a reflection of the affine Weyl group")

    def validate(self):
        """Equivariance of c on the chosen lifts under generator conjugation and Z-shifts."""
        cov = self.cover
        fr = cov.frame
        conjugators = [lift(cov, fr.reflection(s)) for s in fr.simples]
        conjugators += [lift(cov, om) for _, _, om in fr.omega_generators()]
        conjugators += [z_elt(cov, z) for z in cov.z.generators()]
        for i, s in enumerate(fr.simples):
            t = lift(cov, fr.reflection(s))
            ct = self.c_of(t)
            for g in conjugators:
                lhs = self.c_of(g * t * g.inv())
                rhs = kz_bullet(cov, g.base, ct)
                if not kz_equal(lhs, rhs):
                    raise ParamInvalid(
                        f"c is not conjugation-equivariant at simple {s.name}")
            for z in cov.z.generators():
                lhs = self.c_of(t * z_elt(cov, z))
                rhs = kz_shift(cov, ct, z)
                if not kz_equal(lhs, rhs):
                    raise ParamInvalid(f"c_{{tz}} != c_t z at simple {s.name}")
        return True


def preset_params(cover: CoverSpec, field: BaseField, kind: str = "minus_one") -> ParamSet:
    """'minus_one': c_s = -1 (Iwahori-like); 'z_sum': c_s = sum over Z."""
    fr = cover.frame
    if kind == "minus_one":
        c = {cover.z.zero: -field.one}
        return ParamSet(cover, field, {i: dict(c) for i in range(len(fr.simples))}, label=kind)
    if kind == "z_sum":
        c = {z: field.one for z in cover.z.elements()}
        return ParamSet(cover, field, {i: dict(c) for i in range(len(fr.simples))}, label=kind)
    raise ValueError(f"unknown preset {kind!r}")


# ---------------------------------------------------------------------------
# algebra handles and elements


class HeckeAlgebra:
    """Handle for the pro-p Hecke algebra of W~_J(1) at q = 0 or generic q."""

    def __init__(self, datum: BasedRootDatum, cover: CoverSpec, params: ParamSet,
                 J=None, mode: str = "q0", base_field: BaseField | None = None):
        if mode not in ("q0", "generic"):
            raise ValueError("mode must be 'q0' or 'generic'")
        self.datum = datum
        self.cover = cover
        self.params = params
        self.J = frozenset(J) if J is not None else frozenset(range(len(datum.simple_indices)))
        self.mode = mode
        base = base_field if base_field is not None else params.field
        if mode == "generic":
            self.field = base if isinstance(base, RationalFunctionField) else RationalFunctionField(base)
            self.base_field = self.field.base
            self.q = self.field.q
        else:
            if isinstance(base, RationalFunctionField):
                base = base.base
            self.field = base
            self.base_field = base
            self.q = base.zero
        self.frame: Frame = get_frame(datum, self.J)
        self._decomp_cache = {}
        self._c_scalar_cache = {}

    # -- plumbing -----------------------------------------------------------

    def is_full(self) -> bool:
        return self.J == frozenset(range(len(self.datum.simple_indices)))

    def same_handle(self, other: "HeckeAlgebra") -> bool:
        return (self.datum is other.datum and self.cover is other.cover
                and self.params is other.params and self.J == other.J
                and self.mode == other.mode)

    def scalar(self, x):
        """Coerce a base-field scalar into this algebra's scalar field."""
        if self.mode == "generic" and not isinstance(x, type(self.field.q)):
            return self.field.from_base(x)
        return x

    def c_dict(self, t: ProPElement):
        """c_{t} as a dict Z -> algebra scalar."""
        key = t
        out = self._c_scalar_cache.get(key)
        if out is None:
            out = {z: self.scalar(v) for z, v in self.params.c_of(t).items()}
            self._c_scalar_cache[key] = out
        return out

    def decompose(self, x: ProPElement):
        """(z, omega, word) with T_x = T_z T_omega prod_i T_{t_i} along l_J-canonical lifts."""
        out = self._decomp_cache.get(x)
        if out is None:
            fr = self.frame
            fr.require(x.base)
            omega, word = fr.reduced_word(x.base)
            cand = lift(self.cover, omega)
            for i in word:
                cand = cand * lift(self.cover, fr.reflection(fr.simples[i]))
            zrest = x * cand.inv()
            assert zrest.base == identity_elt(self.datum)
            out = (zrest.z, omega, word)
            self._decomp_cache[x] = out
        return out

    # -- element constructors --------------------------------------------------

    def zero(self) -> "HeckeElement":
        return HeckeElement(self, {})

    def one(self) -> "HeckeElement":
        return self.basis(identity_p(self.cover))

    def basis(self, w: ProPElement) -> "HeckeElement":
        self.frame.require(w.base)
        return HeckeElement(self, {w: self.field.one})

    def from_dict(self, d) -> "HeckeElement":
        return HeckeElement(self, {w: c for w, c in d.items() if c})

    def from_kz(self, kz) -> "HeckeElement":
        return HeckeElement(self, {z_elt(self.cover, z): self.scalar(c) for z, c in kz.items() if c})

    def parabolic(self, J) -> "HeckeAlgebra":
        if not frozenset(J) <= frozenset(range(len(self.datum.simple_indices))):
            raise ValueError("J must be a subset of the simple reflections")
        return HeckeAlgebra(self.datum, self.cover, self.params, J=J,
                            mode=self.mode, base_field=self.base_field)

    def generic_twin(self) -> "HeckeAlgebra":
        return HeckeAlgebra(self.datum, self.cover, self.params, J=self.J,
                            mode="generic", base_field=self.base_field)

    def q0_twin(self) -> "HeckeAlgebra":
        return HeckeAlgebra(self.datum, self.cover, self.params, J=self.J,
                            mode="q0", base_field=self.base_field)

    # -- multiplication ----------------------------------------------------------

    def _rmul_z(self, d, z: ZElt):
        return {w * z_elt(self.cover, z): c for w, c in d.items()}

    def _rmul_omega(self, d, omega: ExtAffineElement):
        om = lift(self.cover, omega)
        return {w * om: c for w, c in d.items()}

    def _rmul_simple(self, d, i: int):
        fr = self.frame
        t_lift = lift(self.cover, fr.reflection(fr.simples[i]))
        ct = self.c_dict(t_lift)
        out = {}
        def bump(w, c):
            cur = out.get(w)
            out[w] = c if cur is None else cur + c
        for w, c in d.items():
            wt = w * t_lift
            if fr.length(wt.base) > fr.length(w.base):
                bump(wt, c)
            else:
                if self.mode == "generic":
                    bump(wt, c * self.q)
                for z, a in ct.items():
                    bump(w * z_elt(self.cover, z), c * a)
        return {w: c for w, c in out.items() if c}

    def mul_basis(self, d, y: ProPElement):
        """d * T_y for a coefficient dict d."""
        zy, omega, word = self.decompose(y)
        if any(zy):
            d = self._rmul_z(d, zy)
        if omega != identity_elt(self.datum):
            d = self._rmul_omega(d, omega)
        for i in word:
            d = self._rmul_simple(d, i)
        return d

    def mul(self, a: "HeckeElement", b: "HeckeElement") -> "HeckeElement":
        if not self.same_handle(a.algebra) or not self.same_handle(b.algebra):
            raise AlgebraMismatch("operands from different algebra handles")
        out = {}
        for y, cy in b.items():
            part = self.mul_basis(a.coeffs, y)
            for w, c in part.items():
                cur = out.get(w)
                val = c * cy
                out[w] = val if cur is None else cur + val
        return HeckeElement(self, {w: c for w, c in out.items() if c})


class HeckeElement:
    """Finite k-linear combination of T_w; immutable value object."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: HeckeAlgebra, coeffs):
        self.algebra = algebra
        self.coeffs = {w: c for w, c in coeffs.items() if c}

    def items(self):
        return self.coeffs.items()

    def support(self):
        return set(self.coeffs.keys())

    def coeff(self, w: ProPElement):
        return self.coeffs.get(w, self.algebra.field.zero)

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        if not self.algebra.same_handle(other.algebra):
            raise AlgebraMismatch("operands from different algebra handles")
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            cur = out.get(w)
            out[w] = c if cur is None else cur + c
        return HeckeElement(self.algebra, out)

    def __neg__(self) -> "HeckeElement":
        return HeckeElement(self.algebra, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return self.algebra.mul(self, other)
        return HeckeElement(self.algebra, {w: c * other for w, c in self.coeffs.items()})

    def __rmul__(self, other):
        # scalar * element
        return HeckeElement(self.algebra, {w: other * c for w, c in self.coeffs.items()})

    def __eq__(self, other):
        return (isinstance(other, HeckeElement) and self.algebra.same_handle(other.algebra)
                and self.coeffs == other.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for w in sorted(self.coeffs, key=lambda t: (t.length, t.sort_key())):
            bits.append(f"({self.coeffs[w]!r})*T[{w!r}]")
        return " + ".join(bits)

    def map_scalars(self, fn, target_algebra: "HeckeAlgebra") -> "HeckeElement":
        return HeckeElement(target_algebra, {w: fn(c) for w, c in self.coeffs.items()})

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        alg = self.algebra
        items = []
        for w in sorted(self.coeffs, key=lambda t: (t.length, t.sort_key())):
            items.append([_propelement_to_obj(w), alg.field.fmt(self.coeffs[w])])
        return json.dumps(items)

    @classmethod
    def from_json(cls, algebra: HeckeAlgebra, text: str) -> "HeckeElement":
        items = json.loads(text)
        out = {}
        for obj, scal in items:
            w = _propelement_from_obj(algebra.cover, obj)
            out[w] = algebra.field.parse(scal)
        return cls(algebra, out)


def _propelement_to_obj(w: ProPElement):
    return {"z": list(w.z), "t": list(w.base.translation), "w": list(w.base.fin.word)}


def _propelement_from_obj(cover: CoverSpec, obj) -> ProPElement:
    d = cover.datum
    fin = d.identity
    for si in obj["w"]:
        fin = d.mul_w(fin, d.simple_refl[si])
    base = ExtAffineElement(d, tuple(obj["t"]), fin)
    return ProPElement(cover, tuple(obj["z"]), base)


# ---------------------------------------------------------------------------
# positivity and the parabolic embedding


def embed_positive(e: HeckeElement, full: HeckeAlgebra) -> HeckeElement:
    """H~_J+ -> H~, T^J_u -> T_u; raises NotPositive off the positive cone."""
    par = e.algebra
    if not full.is_full() or full.datum is not par.datum or full.mode != par.mode:
        raise AlgebraMismatch("target must be the full algebra over the same data")
    fr = par.frame
    for u in e.support():
        if not fr.is_positive(u.base):
            raise NotPositive(f"{u!r} is not J-positive for J={sorted(par.J)}")
    return HeckeElement(full, dict(e.coeffs))


def positivity_closure_check(par: HeckeAlgebra, x: ProPElement, y: ProPElement) -> bool:
    """Expand T^J_x T^J_y and confirm every support element is J-positive."""
    fr = par.frame
    if not (fr.is_positive(x.base) and fr.is_positive(y.base)):
        raise NotPositive("inputs must be J-positive")
    prod = par.mul(par.basis(x), par.basis(y))
    return all(fr.is_positive(u.base) for u in prod.support())
