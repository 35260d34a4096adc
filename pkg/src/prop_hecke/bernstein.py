"""Generic-parameter machinery: T-inverses, theta elements, the integral basis E_w,
and the involution iota(T_w) = (-1)^l(w) q(w) T_{w^-1}^-1.

Everything here lives in a 'generic' mode algebra (scalars rational functions
in q); the q = 0 algebra only sees these through specialization, since T_w is
not invertible at q = 0. On a generator lift the involution collapses to
iota(T_t) = -T_t + c_t with no q left, so iota commutes with specialization.
"""

from __future__ import annotations

from .cover import ProPElement, identity_p, lift, z_elt
from .errors import HalfIntegerExponent, NotTranslation, PoleAtZero
from .hecke import HeckeAlgebra, HeckeElement


def _require_generic(alg: HeckeAlgebra):
    if alg.mode != "generic":
        raise ValueError("operation requires a generic-mode algebra")


def invert_basis(alg: HeckeAlgebra, w: ProPElement) -> HeckeElement:
    """T_w^{-1} in the generic algebra, along the canonical decomposition of w."""
    _require_generic(alg)
    z, omega, word = alg.decompose(w)
    cov = alg.cover
    out = alg.one()
    # (T_z T_omega T_{t_1} ... T_{t_k})^-1 = T_{t_k}^-1 ... T_{t_1}^-1 T_omega^-1 T_z^-1
    for i in reversed(word):
        t = lift(cov, alg.frame.reflection(alg.frame.simples[i]))
        out = out * _invert_simple(alg, t)
    om = lift(cov, omega)
    out = out * alg.basis(om.inv())
    out = out * alg.basis(z_elt(cov, z).inv())
    return out


def _invert_simple(alg: HeckeAlgebra, t: ProPElement) -> HeckeElement:
    # T_t^2 = q T_{t^2} + c_t T_t  =>  T_t^-1 = q^-1 (T_{t^-2} T_t - T_{t^-2} c_t)
    cov = alg.cover
    tinv2 = alg.basis((t * t).inv())
    c_elt = alg.from_kz(alg.params.c_of(t))
    qinv = alg.field.one / alg.q
    return qinv * (tinv2 * alg.basis(t) - tinv2 * c_elt)


def strictly_dominant_vector(datum):
    """A small lattice vector pairing at least 1 with every simple coroot."""
    for radius in range(1, 8):
        rng = range(-radius, radius + 1)
        best = None
        def rec(prefix):
            nonlocal best
            if best is not None:
                return
            if len(prefix) == datum.rank_x:
                lam = tuple(prefix)
                if all(datum.pair(lam, cv) >= 1 for cv in datum.simple_coroots):
                    best = lam
                return
            for c in rng:
                rec(prefix + [c])
        rec([])
        if best is not None:
            return best
    raise RuntimeError("no strictly dominant vector found")


def _dominant_factorization(alg: HeckeAlgebra, lam: ProPElement):
    """lam = lam1 * lam2^-1 with both parts lifts of dominant translations."""
    if not lam.base.is_translation():
        raise NotTranslation("theta requires a lift of a translation")
    d = alg.datum
    mu = lam.base.translation
    delta = strictly_dominant_vector(d)
    m = 0
    while not all(d.pair(tuple(x + m * y for x, y in zip(mu, delta)), d.coroots[i]) >= 0
                  for i in d.pos_indices):
        m += 1
    from .affine import translation as tr
    lam2 = lift(alg.cover, tr(d, tuple(m * y for y in delta)))
    lam1 = lam * lam2
    return lam1, lam2


def theta(alg: HeckeAlgebra, lam: ProPElement) -> HeckeElement:
    """theta_lam = T_{lam1} T_{lam2}^{-1} for a dominant factorization of lam."""
    _require_generic(alg)
    lam1, lam2 = _dominant_factorization(alg, lam)
    return alg.basis(lam1) * invert_basis(alg, lam2)


def e_basis(alg: HeckeAlgebra, w: ProPElement) -> HeckeElement:
    """The integral basis element E_w = q^e T_{w0 lam1} T_{lam2}^{-1}."""
    _require_generic(alg)
    d = alg.datum
    fr = alg.frame
    from .affine import ExtAffineElement
    fin_lift = lift(alg.cover, ExtAffineElement(d, (0,) * d.rank_x, w.base.fin))
    lam = fin_lift.inv() * w
    lam1, lam2 = _dominant_factorization(alg, lam)
    l = fr.length
    exp2 = (l(lam2.base) - l(lam1.base) - l(fin_lift.base) + l(w.base))
    if exp2 % 2 != 0:
        raise HalfIntegerExponent(f"E-exponent {exp2}/2 is not an integer for {w!r}")
    e = exp2 // 2
    out = alg.basis(fin_lift * lam1) * invert_basis(alg, lam2)
    out = (alg.q ** e) * out
    for _, c in out.items():
        if not c.is_polynomial():
            raise HalfIntegerExponent(f"E_{w!r} has a non-polynomial coefficient {c!r}")
    return out


def specialize_q0(e: HeckeElement) -> HeckeElement:
    """Coefficientwise evaluation at q = 0 into the q0 twin algebra."""
    alg = e.algebra
    _require_generic(alg)
    target = alg.q0_twin()
    out = {}
    for w, c in e.items():
        v = c.eval_at_zero()
        if v:
            out[w] = v
    return HeckeElement(target, out)


def lift_to_generic(e: HeckeElement) -> HeckeElement:
    alg = e.algebra
    if alg.mode == "generic":
        return e
    target = alg.generic_twin()
    return HeckeElement(target, {w: target.field.from_base(c) for w, c in e.items()})


def iota_basis(alg: HeckeAlgebra, w: ProPElement) -> HeckeElement:
    """iota(T_w) computed multiplicatively: generator lifts go to -T_t + c_t."""
    _require_generic(alg)
    cov = alg.cover
    z, omega, word = alg.decompose(w)
    out = alg.basis(z_elt(cov, z)) * alg.basis(lift(cov, omega))
    for i in word:
        t = lift(cov, alg.frame.reflection(alg.frame.simples[i]))
        factor = alg.from_kz(alg.params.c_of(t)) - alg.basis(t)
        out = out * factor
    return out


def iota(e: HeckeElement) -> HeckeElement:
    """The involution, on either mode; q0 input is routed through generic q."""
    alg = e.algebra
    if alg.mode == "q0":
        return specialize_q0(iota(lift_to_generic(e)))
    out = alg.zero()
    for w, c in e.items():
        out = out + c * iota_basis(alg, w)
    return out


def iota_defining_formula(alg: HeckeAlgebra, w: ProPElement) -> HeckeElement:
    """(-1)^l(w) q^l(w) T_{w^-1}^-1; equality with iota_basis is a test oracle."""
    _require_generic(alg)
    ln = alg.frame.length(w.base)
    sign = alg.field.one if ln % 2 == 0 else -alg.field.one
    return sign * (alg.q ** ln) * invert_basis(alg, w.inv())


def to_iota_basis(e: HeckeElement):
    """Coefficients of e in the basis (iota(T_w))_w; greedy by length (triangular)."""
    alg = e.algebra
    rest = e
    out = {}
    guard = 0
    while rest:
        guard += 1
        if guard > 10_000:
            raise RuntimeError("iota-basis expansion does not terminate")
        w = max(rest.support(), key=lambda t: (t.length, t.sort_key()))
        c = rest.coeff(w)
        sign = alg.field.one if w.length % 2 == 0 else -alg.field.one
        coeff = c * sign  # iota(T_w) = (-1)^l T_w + shorter
        ib = iota(alg.basis(w)) if alg.mode == "q0" else None
        if ib is None:
            ib = iota_basis(alg, w)
        out[w] = coeff
        rest = rest - coeff * ib
        if w in rest.support():
            raise RuntimeError("iota-basis expansion is not triangular")
    return out


def normalized_pair_product(alg: HeckeAlgebra, y: ProPElement, x: ProPElement) -> HeckeElement:
    """q^{(l(x) - l(y) + l(yx))/2} T_y T_{x^-1}^{-1} in the generic algebra."""
    _require_generic(alg)
    l = alg.frame.length
    exp2 = l(x.base) - l(y.base) + l((y * x).base)
    if exp2 % 2 != 0:
        raise HalfIntegerExponent("normalized product exponent is not an integer")
    return (alg.q ** (exp2 // 2)) * (alg.basis(y) * invert_basis(alg, x.inv()))
