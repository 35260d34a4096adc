"""Based root data and their finite Weyl groups, with exact integer/rational arithmetic.

A datum is stored concretely: X = Z^rank_x, Y = Z^rank_y, a perfect pairing
matrix P with <x, y> = x P y^T, an explicit root list in X with the parallel
coroot list in Y, and the indices of the simple roots. Weyl group elements
carry their action matrix on X, the contragredient action on Y, and the
lexicographically least reduced word over the simple reflections (the fixed
tie-breaking order used everywhere downstream).

Vectors are plain int tuples; dominance computations use Fractions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import NonCrystallographic, PairingDegenerate
from .zlattice import mat_inverse_int

Vec = tuple

_CLOSURE_CAP = 400


@dataclass(frozen=True)
class FiniteWeylElement:
    """Element of W0: action matrix on X, on Y, and canonical reduced word."""

    xmat: tuple
    ymat: tuple
    word: tuple

    @property
    def length(self) -> int:
        return len(self.word)

    def apply(self, v: Vec) -> Vec:
        return tuple(sum(self.xmat[i][j] * v[j] for j in range(len(v))) for i in range(len(self.xmat)))

    def apply_y(self, y: Vec) -> Vec:
        return tuple(sum(self.ymat[i][j] * y[j] for j in range(len(y))) for i in range(len(self.ymat)))

    def __repr__(self):
        return "w[" + ",".join(map(str, self.word)) + "]" if self.word else "w[e]"


def _tmat(rows) -> tuple:
    return tuple(tuple(r) for r in rows)


def _mat_mul(a, b):
    n = len(a)
    return _tmat([[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)])


class BasedRootDatum:
    def __init__(self, pairing, roots, coroots, simple_indices, name="custom"):
        self.name = name
        self.pairing = _tmat(pairing)
        self.rank_x = len(self.pairing)
        self.rank_y = len(self.pairing[0]) if self.rank_x else 0
        self.roots = tuple(tuple(r) for r in roots)
        self.coroots = tuple(tuple(c) for c in coroots)
        self.simple_indices = tuple(simple_indices)
        self._validate()
        self._build_structure()

    # -- basic pairing and reflections ------------------------------------

    def pair(self, v, y):
        """<v, y> for v in X_Q, y in Y_Q."""
        return sum(v[i] * self.pairing[i][j] * y[j]
                   for i in range(self.rank_x) for j in range(self.rank_y))

    def reflection_x(self, root_idx: int):
        a = self.roots[root_idx]
        av = self.coroots[root_idx]
        n = self.rank_x
        cols = []
        for j in range(n):
            e = tuple(1 if t == j else 0 for t in range(n))
            img = tuple(e[i] - self.pair(e, av) * a[i] for i in range(n))
            cols.append(img)
        return _tmat([[cols[j][i] for j in range(n)] for i in range(n)])

    def reflection_y(self, root_idx: int):
        a = self.roots[root_idx]
        av = self.coroots[root_idx]
        n = self.rank_y
        cols = []
        for j in range(n):
            e = tuple(1 if t == j else 0 for t in range(n))
            img = tuple(e[i] - self.pair(a, e) * av[i] for i in range(n))
            cols.append(img)
        return _tmat([[cols[j][i] for j in range(n)] for i in range(n)])

    # -- validation --------------------------------------------------------

    def _validate(self):
        if self.rank_x != self.rank_y:
            raise PairingDegenerate("perfect pairing needs rank X = rank Y")
        try:
            mat_inverse_int(self.pairing)
        except ValueError:
            raise PairingDegenerate("pairing matrix is not unimodular") from None
        if len(self.roots) != len(self.coroots):
            raise PairingDegenerate("roots and coroots must be parallel lists")
        for a, av in zip(self.roots, self.coroots):
            if self.pair(a, av) != 2:
                raise PairingDegenerate(f"<alpha, alpha_vee> = {self.pair(a, av)} != 2 for {a}")
        if len(set(self.roots)) != len(self.roots):
            raise NonCrystallographic("duplicate roots")
        root_set = set(self.roots)
        for idx in range(len(self.roots)):
            m = self.reflection_x(idx)
            for b in self.roots:
                img = tuple(sum(m[i][j] * b[j] for j in range(self.rank_x)) for i in range(self.rank_x))
                if img not in root_set:
                    raise NonCrystallographic(f"reflection in {self.roots[idx]} does not permute roots")

    def _build_structure(self):
        # simple-root coordinates of every root; fixes the positive system
        self.simple_roots = tuple(self.roots[i] for i in self.simple_indices)
        self.simple_coroots = tuple(self.coroots[i] for i in self.simple_indices)
        coords = []
        for a in self.roots:
            c = self._in_simple_basis(a)
            if c is None:
                raise NonCrystallographic(f"root {a} outside the span of simple roots")
            coords.append(c)
        self.root_coords = tuple(coords)
        pos, neg = [], []
        for i, c in enumerate(coords):
            if all(x >= 0 for x in c) and any(x > 0 for x in c):
                pos.append(i)
            elif all(x <= 0 for x in c) and any(x < 0 for x in c):
                neg.append(i)
            else:
                raise NonCrystallographic(f"root {self.roots[i]} is neither positive nor negative")
        if len(pos) != len(neg):
            raise NonCrystallographic("R+ does not split R in half")
        self.pos_indices = tuple(pos)
        self.root_index = {r: i for i, r in enumerate(self.roots)}
        self.sum_pos_coroots = tuple(
            sum(self.coroots[i][j] for i in pos) for j in range(self.rank_y)
        )
        self._build_weyl_group()

    def _in_simple_basis(self, a):
        """Rational coordinates of a in the simple-root basis, or None."""
        k = len(self.simple_roots)
        rows = [[Fraction(self.simple_roots[j][i]) for j in range(k)] for i in range(self.rank_x)]
        rhs = [Fraction(a[i]) for i in range(self.rank_x)]
        # gaussian elimination on the (rank_x x k) system
        aug = [rows[i] + [rhs[i]] for i in range(self.rank_x)]
        r = 0
        pivots = []
        for c in range(k):
            piv = next((i for i in range(r, self.rank_x) if aug[i][c]), None)
            if piv is None:
                continue
            aug[r], aug[piv] = aug[piv], aug[r]
            pv = aug[r][c]
            aug[r] = [x / pv for x in aug[r]]
            for i in range(self.rank_x):
                if i != r and aug[i][c]:
                    f = aug[i][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
            pivots.append(c)
            r += 1
        sol = [Fraction(0)] * k
        for rr, c in enumerate(pivots):
            sol[c] = aug[rr][-1]
        if any(not any(row[:k]) and row[k] for row in aug):
            return None
        # verify (needed when k < rank_x)
        for i in range(self.rank_x):
            if sum(sol[j] * self.simple_roots[j][i] for j in range(k)) != a[i]:
                return None
        return tuple(sol)

    def _build_weyl_group(self):
        n = self.rank_x
        ident = _tmat([[1 if i == j else 0 for j in range(n)] for i in range(n)])
        identy = _tmat([[1 if i == j else 0 for j in range(self.rank_y)] for i in range(self.rank_y)])
        gens = []
        for si, ridx in enumerate(self.simple_indices):
            gens.append((self.reflection_x(ridx), self.reflection_y(ridx)))
        seen = {ident: FiniteWeylElement(ident, identy, ())}
        frontier = [ident]
        while frontier:
            nxt = []
            for m in frontier:
                el = seen[m]
                for si, (gx, gy) in enumerate(gens):
                    m2 = _mat_mul(m, gx)  # right multiplication: el * s_i
                    if m2 not in seen:
                        y2 = _mat_mul(el.ymat, gy)
                        seen[m2] = FiniteWeylElement(m2, y2, el.word + (si,))
                        nxt.append(m2)
            frontier = nxt
            if len(seen) > 10**6:
                raise NonCrystallographic("Weyl group closure does not terminate")
        self.w0_elements = tuple(sorted(seen.values(), key=lambda e: (len(e.word), e.word)))
        self._by_xmat = {e.xmat: e for e in self.w0_elements}
        self.identity = seen[ident]
        self.simple_refl = tuple(self._by_xmat[g[0]] for g in gens)
        self._inv_cache = {}

    # -- group operations ---------------------------------------------------

    def mul_w(self, a: FiniteWeylElement, b: FiniteWeylElement) -> FiniteWeylElement:
        return self._by_xmat[_mat_mul(a.xmat, b.xmat)]

    def inv_w(self, a: FiniteWeylElement) -> FiniteWeylElement:
        inv = self._inv_cache.get(a.xmat)
        if inv is None:
            ident = self.identity.xmat
            for b in self.w0_elements:
                if _mat_mul(a.xmat, b.xmat) == ident:
                    inv = b
                    break
            else:
                raise KeyError("inverse not found")
            self._inv_cache[a.xmat] = inv
        return inv

    def element_from_xmat(self, xmat) -> FiniteWeylElement:
        return self._by_xmat[_tmat(xmat)]

    def inversions(self, w: FiniteWeylElement) -> int:
        """#{alpha in R+ : w(alpha) in R-}; equals the word length."""
        count = 0
        for i in self.pos_indices:
            img = w.apply(self.roots[i])
            if self.root_index[img] not in self.pos_indices:
                count += 1
        return count

    def delta(self, w: FiniteWeylElement, root_idx: int) -> int:
        """0 if w(alpha) positive, 1 if negative."""
        img = w.apply(self.roots[root_idx])
        return 0 if self.root_index[img] in self.pos_indices else 1

    # -- dominance and parabolic data ---------------------------------------

    def dominant_rep(self, v):
        """(v_plus, w) with w(v) = v_plus dominant. Exact rationals."""
        cur = tuple(Fraction(x) for x in v)
        w = self.identity
        moved = True
        while moved:
            moved = False
            for si in range(len(self.simple_indices)):
                if self.pair(cur, self.simple_coroots[si]) < 0:
                    s = self.simple_refl[si]
                    cur = tuple(
                        cur[i] - self.pair(cur, self.simple_coroots[si]) * self.simple_roots[si][i]
                        for i in range(self.rank_x)
                    )
                    w = self.mul_w(s, w)
                    moved = True
                    break
        return cur, w

    def j_of(self, v) -> frozenset:
        """Simple reflections pairing to zero with v (indices into the simple list)."""
        return frozenset(
            si for si in range(len(self.simple_indices))
            if self.pair(tuple(Fraction(x) for x in v), self.simple_coroots[si]) == 0
        )

    def two_rho_check_pair(self, v):
        return sum(self.pair(tuple(Fraction(x) for x in v), self.coroots[i]) for i in self.pos_indices)

    def r_j_indices(self, J: frozenset) -> tuple:
        """Indices of roots lying in the span of the J-simples."""
        out = []
        for i, c in enumerate(self.root_coords):
            if all(c[t] == 0 for t in range(len(c)) if t not in J):
                out.append(i)
        return tuple(out)

    def w_j_elements(self, J: frozenset) -> tuple:
        """Elements of the standard parabolic W_J, canonical order."""
        gens = [self.simple_refl[si] for si in sorted(J)]
        seen = {self.identity.xmat: self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for el in frontier:
                for g in gens:
                    m2 = self.mul_w(el, g)
                    if m2.xmat not in seen:
                        seen[m2.xmat] = m2
                        nxt.append(m2)
            frontier = nxt
        return tuple(sorted(seen.values(), key=lambda e: (len(e.word), e.word)))

    def min_coset_reps_w0(self, J: frozenset, side: str = "left") -> tuple:
        """Minimal reps of W0/W_J (side='left': cosets wW_J) or W_J\\W0 (side='right')."""
        out = []
        for w in self.w0_elements:
            if side == "left":
                ok = all(self.delta(w, self.simple_indices[si]) == 0 for si in J)
            else:
                wi = self.inv_w(w)
                ok = all(self.delta(wi, self.simple_indices[si]) == 0 for si in J)
            if ok:
                out.append(w)
        return tuple(out)

    # -- irreducible components and highest coroots (affine node data) ------

    def components(self, simple_subset=None) -> tuple:
        """Connected components of the Dynkin graph on the given simples."""
        nodes = sorted(simple_subset if simple_subset is not None else range(len(self.simple_indices)))
        adj = {i: set() for i in nodes}
        for i in nodes:
            for j in nodes:
                if i != j and self.pair(self.simple_roots[i], self.simple_coroots[j]) != 0:
                    adj[i].add(j)
        comps = []
        todo = set(nodes)
        while todo:
            start = min(todo)
            comp = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            todo -= comp
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    def highest_coroot_root(self, component) -> int:
        """Root index whose coroot is the highest coroot of the component's subsystem."""
        comp = frozenset(component)
        rj = self.r_j_indices(comp)
        # coroot coordinates in the simple-coroot basis of the component
        simples = sorted(comp)
        best = None
        for i in rj:
            coords = self._coroot_coords(i, simples)
            if coords is None:
                continue
            if all(x >= 0 for x in coords):
                if best is None:
                    best = (i, coords)
                else:
                    diff = [a - b for a, b in zip(coords, best[1])]
                    if all(x >= 0 for x in diff):
                        best = (i, coords)
        if best is None:
            raise NonCrystallographic("no highest coroot found")
        # uniqueness: it must dominate every coroot of the component
        for i in rj:
            coords = self._coroot_coords(i, simples)
            if coords is None:
                continue
            if any(a - b < 0 for a, b in zip(best[1], coords)):
                raise NonCrystallographic("highest coroot is not unique")
        return best[0]

    def _coroot_coords(self, root_idx: int, simples):
        cv = self.coroots[root_idx]
        k = len(simples)
        aug = [[Fraction(self.simple_coroots[s][i]) for s in simples] + [Fraction(cv[i])]
               for i in range(self.rank_y)]
        r = 0
        pivots = []
        for c in range(k):
            piv = next((i for i in range(r, self.rank_y) if aug[i][c]), None)
            if piv is None:
                continue
            aug[r], aug[piv] = aug[piv], aug[r]
            pv = aug[r][c]
            aug[r] = [x / pv for x in aug[r]]
            for i in range(self.rank_y):
                if i != r and aug[i][c]:
                    f = aug[i][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
            pivots.append(c)
            r += 1
        sol = [Fraction(0)] * k
        for rr, c in enumerate(pivots):
            sol[c] = aug[rr][-1]
        for i in range(self.rank_y):
            if sum(sol[j] * self.simple_coroots[simples[j]][i] for j in range(k)) != cv[i]:
                return None
        return tuple(sol)

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lattices": {
                "pairing": [list(r) for r in self.pairing],
                "roots": [list(r) for r in self.roots],
                "coroots": [list(r) for r in self.coroots],
                "simple": list(self.simple_indices),
            },
        }

    def __repr__(self):
        return f"BasedRootDatum({self.name}, {len(self.roots)} roots, |W0|={len(self.w0_elements)})"


# ---------------------------------------------------------------------------
# construction


def _closure_from_simples(pairing, simple_roots, simple_coroots):
    """Reflection-closure of the simple (root, coroot) pairs."""
    def pair(v, y):
        return sum(v[i] * pairing[i][j] * y[j] for i in range(len(v)) for j in range(len(y)))

    pairs = list(zip([tuple(r) for r in simple_roots], [tuple(c) for c in simple_coroots]))
    seen = set(pairs)
    frontier = list(pairs)
    while frontier:
        nxt = []
        for (b, bv) in frontier:
            for (a, av) in list(zip(simple_roots, simple_coroots)):
                k = pair(b, av)
                m = pair(a, bv)
                img = tuple(b[i] - k * a[i] for i in range(len(b)))
                imgv = tuple(bv[i] - m * av[i] for i in range(len(bv)))
                if (img, imgv) not in seen:
                    seen.add((img, imgv))
                    nxt.append((img, imgv))
        frontier = nxt
        if len(seen) > _CLOSURE_CAP:
            raise NonCrystallographic("root closure exceeds cap; system not finite crystallographic")
    roots = sorted(seen)
    return [r for r, _ in roots], [c for _, c in roots]


_BUILTIN_SPECS = {
    # SL2-like rank 1: X = Z, alpha = 2, alpha_vee = 1, Omega = Z/2
    "D1": {"pairing": [[1]], "simple_roots": [[2]], "simple_coroots": [[1]]},
    "GL2": {
        "pairing": [[1, 0], [0, 1]],
        "simple_roots": [[1, -1]],
        "simple_coroots": [[1, -1]],
    },
    # A2, simply-connected flavor: X = weight lattice, Omega = Z/3
    "A2": {
        "pairing": [[1, 0], [0, 1]],
        "simple_roots": [[2, -1], [-1, 2]],
        "simple_coroots": [[1, 0], [0, 1]],
    },
    # A2, adjoint flavor: X = root lattice, Omega trivial
    "A2-adjoint": {
        "pairing": [[1, 0], [0, 1]],
        "simple_roots": [[1, 0], [0, 1]],
        "simple_coroots": [[2, -1], [-1, 2]],
    },
    # C2 = Sp4: X = Z^2, short alpha1 = e1 - e2, long alpha2 = 2 e2, Omega = Z/2
    "C2": {
        "pairing": [[1, 0], [0, 1]],
        "simple_roots": [[1, -1], [0, 2]],
        "simple_coroots": [[1, -1], [0, 1]],
    },
    "G2": {
        "pairing": [[1, 0], [0, 1]],
        "simple_roots": [[1, 0], [0, 1]],
        "simple_coroots": [[2, -3], [-1, 2]],
    },
}


def build_datum(spec) -> BasedRootDatum:
    """Build a datum from a built-in name, a dict, or a JSON/TOML file payload."""
    if isinstance(spec, str):
        if spec in _BUILTIN_SPECS:
            s = _BUILTIN_SPECS[spec]
            roots, coroots = _closure_from_simples(s["pairing"], s["simple_roots"], s["simple_coroots"])
            simple = [roots.index(tuple(r)) for r in s["simple_roots"]]
            return BasedRootDatum(s["pairing"], roots, coroots, simple, name=spec)
        raise ValueError(f"unknown built-in datum {spec!r}; known: {sorted(_BUILTIN_SPECS)}")
    if isinstance(spec, dict):
        if "type" in spec and "lattices" not in spec:
            return build_datum(spec["type"])
        lat = spec["lattices"]
        name = spec.get("name", "custom")
        return BasedRootDatum(lat["pairing"], lat["roots"], lat["coroots"], lat["simple"], name=name)
    raise TypeError("spec must be a name or a dict")


def datum_from_json(text: str) -> BasedRootDatum:
    return build_datum(json.loads(text))


@lru_cache(maxsize=None)
def cached_datum(name: str) -> BasedRootDatum:
    return build_datum(name)
