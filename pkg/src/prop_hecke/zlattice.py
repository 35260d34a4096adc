"""Exact integer-lattice utilities: Smith normal form, lattice membership, quotients.

All matrices are lists/tuples of rows of ints. Lattices are given by a list of
generating rows inside Z^n. Sizes here are tiny (n <= 4), so the naive
algorithms are fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def mat_identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def mat_vec(a, v):
    return tuple(sum(a[i][j] * v[j] for j in range(len(v))) for i in range(len(a)))


def vec_mat(v, a):
    m = len(a[0]) if a else 0
    return tuple(sum(v[i] * a[i][j] for i in range(len(v))) for j in range(m))


def mat_inverse_int(a):
    """Inverse of a unimodular integer matrix (exact; raises if not invertible over Z)."""
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix not invertible")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    inv = [[m[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix not invertible over Z")
    return [[int(x) for x in row] for row in inv]


@dataclass
class SmithForm:
    """U @ A @ V = D with U, V unimodular and D diagonal, d_i | d_{i+1}."""

    d: list[int]        # diagonal entries, including trailing zeros up to min(m, n)
    u: list[list[int]]  # m x m
    v: list[list[int]]  # n x n
    rank: int


def smith_normal_form(a_in) -> SmithForm:
    a = [list(row) for row in a_in]
    m = len(a)
    n = len(a[0]) if m else 0
    u = mat_identity(m)
    v = mat_identity(n)

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            # Euclidean clearing of row t and column t; |pivot| strictly drops on swaps
            changed = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            if all(a[i][t] == 0 for i in range(t + 1, m)) and all(
                a[t][j] == 0 for j in range(t + 1, n)
            ):
                offender = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if a[i][j] % a[t][t] != 0:
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is None:
                    break
                add_row(offender, t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    d = [a[i][i] for i in range(min(m, n))]
    rank = sum(1 for x in d if x != 0)
    return SmithForm(d=d, u=u, v=v, rank=rank)


@dataclass
class QuotientLattice:
    """Structure of Z^n / L for a lattice L given by generating rows.

    Quotient coordinates split into torsion residues (with their moduli) and
    free integer coordinates, via y = x V from the Smith form of L.
    """

    n: int
    moduli: tuple[int, ...]
    free_rank: int
    _v: list[list[int]]
    _v_inv: list[list[int]]
    _torsion_pos: tuple[int, ...]
    _free_pos: tuple[int, ...]

    def coords(self, x) -> tuple[tuple[int, ...], tuple[int, ...]]:
        y = vec_mat(tuple(x), self._v)
        tors = tuple(y[p] % m for p, m in zip(self._torsion_pos, self.moduli))
        free = tuple(y[p] for p in self._free_pos)
        return tors, free

    def rep(self, tors, free):
        """An integer vector with the given quotient coordinates."""
        y = [0] * self.n
        for p, c in zip(self._torsion_pos, tors):
            y[p] = c
        for p, c in zip(self._free_pos, free):
            y[p] = c
        return vec_mat(tuple(y), self._v_inv)

    def generators(self):
        """Representatives generating the quotient, torsion ones first."""
        gens = []
        for i, m in enumerate(self.moduli):
            tors = tuple(1 if j == i else 0 for j in range(len(self.moduli)))
            gens.append(("torsion", m, self.rep(tors, (0,) * self.free_rank)))
        for i in range(self.free_rank):
            free = tuple(1 if j == i else 0 for j in range(self.free_rank))
            gens.append(("free", 0, self.rep((0,) * len(self.moduli), free)))
        return gens

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("quotient is infinite")
        out = 1
        for m in self.moduli:
            out *= m
        return out


def quotient_by_rows(n: int, rows) -> QuotientLattice:
    rows = [list(r) for r in rows]
    if not rows:
        rows = [[0] * n]
    sf = smith_normal_form(rows)
    v = sf.v
    v_inv = mat_inverse_int(v)
    moduli = []
    torsion_pos = []
    free_pos = []
    for i in range(n):
        di = sf.d[i] if i < len(sf.d) else 0
        if di == 0:
            free_pos.append(i)
        elif di > 1:
            moduli.append(di)
            torsion_pos.append(i)
    return QuotientLattice(
        n=n,
        moduli=tuple(moduli),
        free_rank=len(free_pos),
        _v=v,
        _v_inv=v_inv,
        _torsion_pos=tuple(torsion_pos),
        _free_pos=tuple(free_pos),
    )


def in_row_span(rows, b) -> bool:
    """Whether integer vector b lies in the Z-span of the given rows."""
    rows = [list(r) for r in rows]
    if not rows:
        return all(x == 0 for x in b)
    sf = smith_normal_form(rows)
    bv = vec_mat(tuple(b), sf.v)
    for i, x in enumerate(bv):
        di = sf.d[i] if i < len(sf.d) else 0
        if di == 0:
            if x != 0:
                return False
        elif x % di != 0:
            return False
    return True


def solve_exponents(gen_coords, target, moduli, free_rank):
    """Solve sum_i e_i * gen_i = target in the group prod_t Z/m_t x Z^free_rank.

    gen_coords and target are (torsion residues, free coords) pairs. Returns a
    tuple of integer exponents, or None when no solution exists.
    """
    k = len(gen_coords)
    nt = len(moduli)
    rows = []
    rhs = []
    for t in range(nt):
        rows.append([gen_coords[i][0][t] for i in range(k)]
                    + [moduli[t] if j == t else 0 for j in range(nt)])
        rhs.append(target[0][t])
    for f in range(free_rank):
        rows.append([gen_coords[i][1][f] for i in range(k)] + [0] * nt)
        rhs.append(target[1][f])
    if not rows:
        return (0,) * k
    sf = smith_normal_form(rows)
    # rows * e = rhs  =>  D (V^-1 e) = U rhs
    ur = mat_vec(sf.u, tuple(rhs))
    m_, n_ = len(rows), len(rows[0])
    y = [0] * n_
    for i in range(min(m_, n_)):
        di = sf.d[i]
        if di == 0:
            if ur[i] != 0:
                return None
        else:
            if ur[i] % di != 0:
                return None
            y[i] = ur[i] // di
    for i in range(min(m_, n_), m_):
        if ur[i] != 0:
            return None
    e_full = mat_vec(sf.v, tuple(y))
    return tuple(e_full[:k])
