"""Exact scalar arithmetic: Q, GF(p^m), cyclotomic fields Q(zeta_n), and the
rational-function field k(q) used by the generic-parameter algebra.

Every field is an object with `zero`, `one`, `from_int`, `root_of_unity`,
`fmt`/`parse` (exact string round-trip), and elements overloading the usual
operators. Polynomials are coefficient tuples, lowest degree first, with no
trailing zeros; () is the zero polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldTooSmall, PoleAtZero


# ---------------------------------------------------------------------------
# fields over which everything runs


class BaseField:
    label = "?"

    def root_of_unity(self, m: int):
        raise FieldTooSmall(f"{self.label} has no primitive {m}-th root of unity")

    def __repr__(self):
        return self.label


class RationalField(BaseField):
    label = "Q"

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def from_int(self, i: int):
        return Fraction(i)

    def root_of_unity(self, m: int):
        if m == 1:
            return self.one
        if m == 2:
            return -self.one
        raise FieldTooSmall(f"Q has no primitive {m}-th root of unity")

    def fmt(self, x) -> str:
        return str(x)

    def parse(self, s: str):
        return _parse_scalar(self, s)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


QQ = RationalField()


def _poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class GFElt:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs  # tuple of m ints mod p

    def _co(self, other):
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, GFElt) and other.field is self.field:
            return other
        return None

    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return GFElt(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return GFElt(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return (-self) + o

    def __mul__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return GFElt(self.field, self.field._mulmod(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def inverse(self):
        return self.field._inv(self)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.field.from_int(other)
        return isinstance(other, GFElt) and other.field is self.field and other.coeffs == self.coeffs

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __repr__(self):
        return self.field.fmt(self)


class GaloisField(BaseField):
    """GF(p^m), realized as F_p[a]/(modulus). For m = 1 the generator a is p-absent."""

    def __init__(self, p: int, m: int = 1):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"p = {p} is not prime")
        self.p = p
        self.m = m
        self.label = f"F{p}" if m == 1 else f"F{p}^{m}"
        self.modulus = self._find_irreducible() if m > 1 else (0, 1)
        self.zero = GFElt(self, (0,) * m)
        self.one = GFElt(self, tuple([1] + [0] * (m - 1)))
        self._rou_cache: dict[int, GFElt] = {}

    def from_int(self, i: int):
        return GFElt(self, tuple([i % self.p] + [0] * (self.m - 1)))

    def gen(self):
        if self.m == 1:
            raise ValueError("prime field has no extension generator")
        return GFElt(self, tuple([0, 1] + [0] * (self.m - 2)))

    def _mulmod(self, a, b):
        p, m = self.p, self.m
        prod = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        if m == 1:
            return (prod[0],)
        mod = self.modulus  # monic, degree m
        for d in range(2 * m - 2, m - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for j in range(m):
                    prod[d - m + j] = (prod[d - m + j] - c * mod[j]) % p
        return tuple(prod[:m])

    def _inv(self, x: GFElt):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        return x ** (self.p**self.m - 2)

    def _find_irreducible(self):
        # brute-force search for a monic irreducible of degree m over F_p
        p, m = self.p, self.m
        import itertools

        def polmulmod(a, b, mod):
            prod = [0] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
            return polmod(prod, mod)

        def polmod(a, mod):
            a = list(a)
            dm = len(mod) - 1
            for d in range(len(a) - 1, dm - 1, -1):
                c = a[d]
                if c:
                    for j in range(dm + 1):
                        a[d - dm + j] = (a[d - dm + j] - c * mod[j]) % p
            out = a[:dm]
            while len(out) < dm:
                out.append(0)
            return out

        def xpow_mod(e, mod):
            # x^e mod (mod)
            result = [1]
            base = [0, 1]
            result = polmod(result + [0] * (len(mod) - 1 - len(result)), mod)
            base = polmod(base + [0] * max(0, len(mod) - 1 - len(base)), mod)
            while e:
                if e & 1:
                    result = polmulmod(result, base, mod)
                e >>= 1
                if e:
                    base = polmulmod(base, base, mod)
            return result

        def gf_gcd_deg(a, b):
            # degree of gcd over F_p
            def trim(c):
                c = list(c)
                while c and c[-1] % p == 0:
                    c.pop()
                return c

            a, b = trim(a), trim(b)
            while b:
                inv = pow(b[-1], p - 2, p)
                r = list(a)
                while len(r) >= len(b):
                    f = (r[-1] * inv) % p
                    shift = len(r) - len(b)
                    for i, c in enumerate(b):
                        r[shift + i] = (r[shift + i] - f * c) % p
                    r = trim(r)
                    if not r:
                        break
                a, b = b, r
            return len(a) - 1

        x_poly = [0, 1] + [0] * (m - 1)
        for tail in itertools.product(range(p), repeat=m):
            mod = list(tail) + [1]
            if mod[0] == 0:
                continue
            # Rabin test: x^(p^m) == x mod f, and gcd(x^(p^(m/l)) - x, f) = 1 per prime l | m
            if xpow_mod(p**m, mod) != polmod(list(x_poly), mod):
                continue
            ok = True
            for ell in _factorize(m):
                xp = xpow_mod(p ** (m // ell), mod)
                diff = [(u - v) % p for u, v in zip(xp, polmod(list(x_poly), mod))]
                if gf_gcd_deg(mod, diff) > 0:
                    ok = False
                    break
            if ok:
                return tuple(mod)
        raise RuntimeError("no irreducible polynomial found")

    def root_of_unity(self, m: int):
        if m == 1:
            return self.one
        if m in self._rou_cache:
            return self._rou_cache[m]
        order = self.p**self.m - 1
        if m <= 0 or order % m != 0:
            raise FieldTooSmall(f"{self.label} has no primitive {m}-th root of unity")
        g = self._primitive_element()
        z = g ** (order // m)
        self._rou_cache[m] = z
        return z

    def _primitive_element(self):
        order = self.p**self.m - 1
        fac = _factorize(order)
        candidates = [self.from_int(i) for i in range(2, self.p)] if self.m == 1 else []
        if self.m > 1:
            a = self.gen()
            candidates = [a + self.from_int(i) for i in range(self.p)] + [a * a + self.from_int(i) for i in range(self.p)]
        for c in candidates:
            if not c:
                continue
            if all(c ** (order // q) != self.one for q in fac):
                return c
        raise RuntimeError("no primitive element found")

    def fmt(self, x: GFElt) -> str:
        if self.m == 1:
            return str(x.coeffs[0])
        return _fmt_poly(x.coeffs, "a")

    def parse(self, s: str):
        return _parse_scalar(self, s)


def _factorize(n: int):
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def cyclotomic_polynomial(n: int):
    """Coefficients of Phi_n over Q, lowest degree first."""
    # x^n - 1 = prod_{d | n} Phi_d
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            phi_d = cyclotomic_polynomial(d)
            num, rem = _qpoly_divmod(num, list(phi_d))
            assert not any(rem), "cyclotomic division must be exact"
    return tuple(num)


def _qpoly_divmod(a, b):
    a = list(a)
    out = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(_poly_trim(a)) >= len(_poly_trim(b)):
        a = list(_poly_trim(a))
        bb = list(_poly_trim(b))
        shift = len(a) - len(bb)
        f = a[-1] / bb[-1]
        out[shift] = f
        for i, c in enumerate(bb):
            a[shift + i] -= f * c
        a = a[:-1]
    return out, _poly_trim(a)


class CycElt:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs  # tuple of Fractions, length = deg Phi_n

    def _co(self, other):
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, Fraction):
            return self.field.from_fraction(other)
        if isinstance(other, CycElt) and other.field is self.field:
            return other
        return None

    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return CycElt(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycElt(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return (-self) + o

    def __mul__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return CycElt(self.field, self.field._mulmod(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def inverse(self):
        return self.field._inv(self)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self == self._co(other)
        return isinstance(other, CycElt) and other.field is self.field and other.coeffs == self.coeffs

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __repr__(self):
        return self.field.fmt(self)


class CyclotomicField(BaseField):
    """Q(zeta_n) as Q[z]/Phi_n(z)."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.label = f"Q(zeta{n})"
        self.phi = cyclotomic_polynomial(n)
        self.deg = len(self.phi) - 1
        self.zero = CycElt(self, (Fraction(0),) * self.deg)
        one = [Fraction(0)] * self.deg
        one[0] = Fraction(1)
        self.one = CycElt(self, tuple(one))

    def from_int(self, i: int):
        c = [Fraction(0)] * self.deg
        c[0] = Fraction(i)
        return CycElt(self, tuple(c))

    def from_fraction(self, f: Fraction):
        c = [Fraction(0)] * self.deg
        c[0] = Fraction(f)
        return CycElt(self, tuple(c))

    def zeta(self):
        if self.deg == 1:
            # Phi_1 = z - 1, Phi_2 = z + 1
            return self.one if self.n == 1 else -self.one
        c = [Fraction(0)] * self.deg
        c[1] = Fraction(1)
        return CycElt(self, tuple(c))

    def _mulmod(self, a, b):
        deg = self.deg
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        for d in range(2 * deg - 2, deg - 1, -1):
            c = prod[d]
            if c:
                prod[d] = Fraction(0)
                for j in range(deg + 1):
                    prod[d - deg + j] -= c * self.phi[j]
        return tuple(prod[:deg])

    def _inv(self, x: CycElt):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid in Q[z] against Phi_n (irreducible, so gcd is a constant)
        r0, r1 = list(self.phi), list(_poly_trim(x.coeffs))
        s0, s1 = [], [Fraction(1)]
        while True:
            q, r = _qpoly_divmod(r0, r1)
            if not any(r):
                break
            s = _poly_sub(s0, _poly_mul_q(q, s1))
            r0, s0, r1, s1 = r1, s1, list(r), list(s)
        lead = _poly_trim(r1)[-1]
        inv_c = [c / lead for c in s1]
        return CycElt(self, self._reduce(inv_c))

    def _reduce(self, coeffs):
        deg = self.deg
        a = list(coeffs)
        for d in range(len(a) - 1, deg - 1, -1):
            c = a[d]
            if c:
                a[d] = Fraction(0)
                for j in range(deg + 1):
                    a[d - deg + j] -= c * self.phi[j]
        out = a[:deg]
        while len(out) < deg:
            out.append(Fraction(0))
        return tuple(out)

    def root_of_unity(self, m: int):
        if self.n % m == 0:
            return self.zeta() ** (self.n // m)
        if m == 1:
            return self.one
        if m == 2:
            return -self.one
        raise FieldTooSmall(f"{self.label} has no primitive {m}-th root of unity")

    def fmt(self, x: CycElt) -> str:
        return _fmt_poly(x.coeffs, "z")

    def parse(self, s: str):
        return _parse_scalar(self, s)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_mul_q(a, b):
    if not a or not b:
        return []
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    return prod


def _fmt_poly(coeffs, var: str) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            head = "" if c == 1 else ("-" if c == -1 else f"{c}*")
            terms.append(f"{head}{var}" + (f"^{i}" if i > 1 else ""))
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# univariate polynomials and rational functions over a base field


def poly_trim(field, c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def poly_add(field, a, b):
    n = max(len(a), len(b))
    a = list(a) + [field.zero] * (n - len(a))
    b = list(b) + [field.zero] * (n - len(b))
    return poly_trim(field, [x + y for x, y in zip(a, b)])


def poly_neg(field, a):
    return tuple(-x for x in a)


def poly_mul(field, a, b):
    if not a or not b:
        return ()
    prod = [field.zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = prod[i + j] + ai * bj
    return poly_trim(field, prod)


def poly_divmod(field, a, b):
    a = list(poly_trim(field, a))
    b = list(poly_trim(field, b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [field.zero] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            a[shift + i] = a[shift + i] - f * c
        a.pop()
        while a and not a[-1]:
            a.pop()
    return poly_trim(field, q), poly_trim(field, a)


def poly_gcd(field, a, b):
    a = poly_trim(field, a)
    b = poly_trim(field, b)
    while b:
        _, r = poly_divmod(field, a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = tuple(x / lead for x in a)
    return a


def poly_eval(field, a, x):
    out = field.zero
    for c in reversed(a):
        out = out * x + c
    return out


class RatF:
    """Rational function num/den over a base field; den is monic and coprime to num."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den):
        self.field = field
        self.num = num
        self.den = den

    def _co(self, other):
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, RatF) and other.field is self.field:
            return other
        # base-field scalars are allowed on either side
        if isinstance(other, (Fraction, GFElt, CycElt)):
            return self.field.from_base(other)
        return None

    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        f = self.field
        num = poly_add(f.base, poly_mul(f.base, self.num, o.den), poly_mul(f.base, o.num, self.den))
        den = poly_mul(f.base, self.den, o.den)
        return f._make(num, den)

    __radd__ = __add__

    def __neg__(self):
        return RatF(self.field, poly_neg(self.field.base, self.num), self.den)

    def __sub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return (-self) + o

    def __mul__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        f = self.field
        return f._make(poly_mul(f.base, self.num, o.num), poly_mul(f.base, self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by zero rational function")
        f = self.field
        return f._make(poly_mul(f.base, self.num, o.den), poly_mul(f.base, self.den, o.num))

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        f = self.field
        if n < 0:
            return (f.one / self) ** (-n)
        out = f.one
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((id(self.field), self.num, self.den))

    def is_polynomial(self) -> bool:
        return len(self.den) == 1

    def eval_at_zero(self):
        d0 = poly_eval(self.field.base, self.den, self.field.base.zero)
        if not d0:
            raise PoleAtZero("scalar has a pole at q = 0")
        n0 = poly_eval(self.field.base, self.num, self.field.base.zero)
        return n0 / d0

    def __repr__(self):
        return self.field.fmt(self)


class RationalFunctionField(BaseField):
    """k(q) over a base field k. Elements are reduced fractions of polynomials."""

    def __init__(self, base: BaseField):
        self.base = base
        self.label = f"{base.label}(q)"
        self.zero = RatF(self, (), (base.one,))
        self.one = RatF(self, (base.one,), (base.one,))
        self.q = RatF(self, (base.zero, base.one), (base.one,))

    def _make(self, num, den):
        base = self.base
        num = poly_trim(base, num)
        den = poly_trim(base, den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return RatF(self, (), (base.one,))
        g = poly_gcd(base, num, den)
        if len(g) > 1:
            num, _ = poly_divmod(base, num, g)
            den, _ = poly_divmod(base, den, g)
        lead = den[-1]
        if lead != base.one:
            num = tuple(x / lead for x in num)
            den = tuple(x / lead for x in den)
        return RatF(self, num, den)

    def from_int(self, i: int):
        return self.from_base(self.base.from_int(i))

    def from_base(self, x):
        if not x:
            return self.zero
        return RatF(self, (x,), (self.base.one,))

    def root_of_unity(self, m: int):
        return self.from_base(self.base.root_of_unity(m))

    def fmt(self, x: RatF) -> str:
        num = _fmt_qpoly(self.base, x.num)
        if x.is_polynomial():
            return num
        return f"({num})/({_fmt_qpoly(self.base, x.den)})"

    def parse(self, s: str):
        return _parse_scalar(self, s)


def _fmt_qpoly(base, coeffs) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        cs = base.fmt(c)
        if i == 0:
            terms.append(cs)
        else:
            head = "" if c == base.one else f"({cs})*" if ("+" in cs or "-" in cs[1:] or " " in cs) else f"{cs}*"
            if c == -base.one:
                head = "-"
            terms.append(f"{head}q" + (f"^{i}" if i > 1 else ""))
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# scalar literal parser (exact round-trips for serialized elements)


class _Tok:
    def __init__(self, kind, val=None):
        self.kind = kind
        self.val = val


def _tokenize(s: str):
    toks = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(s) and s[j].isdigit():
                j += 1
            toks.append(_Tok("int", int(s[i:j])))
            i = j
        elif ch in "+-*/^()":
            toks.append(_Tok(ch))
            i += 1
        elif ch.isalpha():
            toks.append(_Tok("var", ch))
            i += 1
        else:
            raise ValueError(f"bad character {ch!r} in scalar literal")
    toks.append(_Tok("end"))
    return toks


def _parse_scalar(field, s: str):
    toks = _tokenize(s)
    pos = [0]

    def peek():
        return toks[pos[0]]

    def take(kind=None):
        t = toks[pos[0]]
        if kind and t.kind != kind:
            raise ValueError(f"expected {kind}, got {t.kind} in {s!r}")
        pos[0] += 1
        return t

    def atom():
        t = peek()
        if t.kind == "int":
            take()
            return field.from_int(t.val)
        if t.kind == "var":
            take()
            v = t.val
            if v == "q" and isinstance(field, RationalFunctionField):
                return field.q
            if v == "z" and isinstance(field, CyclotomicField):
                return field.zeta()
            if v == "z" and isinstance(field, RationalFunctionField) and isinstance(field.base, CyclotomicField):
                return field.from_base(field.base.zeta())
            if v == "a" and isinstance(field, GaloisField) and field.m > 1:
                return field.gen()
            if v == "a" and isinstance(field, RationalFunctionField) and isinstance(field.base, GaloisField):
                return field.from_base(field.base.gen())
            raise ValueError(f"unknown symbol {v!r} for field {field.label}")
        if t.kind == "(":
            take()
            x = expr()
            take(")")
            return x
        if t.kind == "-":
            take()
            return -atom_pow()
        raise ValueError(f"bad scalar literal {s!r}")

    def atom_pow():
        x = atom()
        while peek().kind == "^":
            take()
            e = take("int").val
            x = x**e
        return x

    def term():
        x = atom_pow()
        while peek().kind in ("*", "/"):
            op = take().kind
            y = atom_pow()
            x = x * y if op == "*" else x / y
        return x

    def expr():
        t = peek()
        neg = False
        if t.kind == "-":
            take()
            neg = True
        x = term()
        if neg:
            x = -x
        while peek().kind in ("+", "-"):
            op = take().kind
            y = term()
            x = x + y if op == "+" else x - y
        return x

    out = expr()
    take("end")
    return out


# ---------------------------------------------------------------------------
# dense linear algebra over an exact field


def mat_mul_f(field, a, b):
    n = len(a)
    k = len(b)
    m = len(b[0]) if k else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = field.zero
            for t in range(k):
                if a[i][t]:
                    acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_identity_f(field, n):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def mat_trace(field, a):
    out = field.zero
    for i in range(len(a)):
        out = out + a[i][i]
    return out


def rref(field, rows):
    """Row-reduce in place (copies first); returns (reduced rows, pivot columns)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def mat_rank(field, rows):
    if not rows:
        return 0
    _, pivots = rref(field, rows)
    return len(pivots)


def solve_linear(field, a_cols_rows, b):
    """Solve A x = b for one particular solution; A given as list of rows.

    Returns None when inconsistent.
    """
    if not a_cols_rows:
        return None if any(b) else []
    nrows = len(a_cols_rows)
    ncols = len(a_cols_rows[0])
    aug = [list(a_cols_rows[i]) + [b[i]] for i in range(nrows)]
    red, pivots = rref(field, aug)
    for row in red:
        if not any(row[:-1]) and row[-1]:
            return None
    x = [field.zero] * ncols
    for r, c in enumerate(pivots):
        if c == ncols:
            return None
        x[c] = red[r][-1]
    return x


def nullspace(field, rows):
    """Basis of the right kernel of the matrix given by rows."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(field, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * ncols
        v[fc] = field.one
        for r, c in enumerate(pivots):
            v[c] = -red[r][fc]
        basis.append(v)
    return basis


def mat_inverse_f(field, a):
    n = len(a)
    aug = [list(a[i]) + [field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    red, pivots = rref(field, aug)
    if pivots != list(range(n)):
        raise ValueError("matrix not invertible")
    return [row[n:] for row in red]


def column_space_basis(field, mat):
    """Indices-free basis of the column space, as column vectors."""
    if not mat:
        return []
    cols = [[mat[i][j] for i in range(len(mat))] for j in range(len(mat[0]))]
    basis = []
    echelon = []
    for col in cols:
        vec = list(col)
        for e in echelon:
            piv = next(i for i, x in enumerate(e) if x)
            if vec[piv]:
                f = vec[piv] / e[piv]
                vec = [x - f * y for x, y in zip(vec, e)]
        if any(vec):
            echelon.append(vec)
            basis.append(col)
    return basis
