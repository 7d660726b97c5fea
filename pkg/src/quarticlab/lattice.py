"""Order structure constants, the diamond product, kernel lattices (rank 3
per direction, rank 2 per pair), wedge data, and exact shortest vectors.

All lattice computations use integer Hermite-style elimination; ranks are
at most 3 so exhaustive enumeration under exact bounds replaces floating
reduction entirely.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import List, Optional, Sequence, Tuple

from .errors import (
    Collinear,
    DegenerateDirection,
    EmptyLattice,
    InternalIdentityViolation,
    SingularBasis,
    TooLarge,
)
from .exactalg import MultiPoly, uni_coeffs


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def row_echelon_z(rows: List[List[int]], ncols: Optional[int] = None) -> int:
    """In-place integer row echelon over the first ncols columns using
    unimodular row operations; returns the rank."""
    if not rows:
        return 0
    width = len(rows[0])
    if ncols is None:
        ncols = width
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                if piv is None:
                    piv = i
                else:
                    a, b = rows[piv][c], rows[i][c]
                    g, s, t = _xgcd(a, b)
                    u, v = a // g, b // g
                    rp, ri = rows[piv], rows[i]
                    rows[piv] = [s * x + t * y for x, y in zip(rp, ri)]
                    rows[i] = [-v * x + u * y for x, y in zip(rp, ri)]
        if piv is not None:
            rows[r], rows[piv] = rows[piv], rows[r]
            if rows[r][c] < 0:
                rows[r] = [-x for x in rows[r]]
            r += 1
    return r


def hnf_basis(gens: Sequence[Sequence[int]]) -> List[List[int]]:
    """Row basis (echelon form) of the integer row span of gens."""
    rows = [list(g) for g in gens]
    r = row_echelon_z(rows)
    return rows[:r]


def lattice_det(basis: Sequence[Sequence[int]]) -> int:
    """|det| of a full-rank square integer basis."""
    rows = [list(b) for b in basis]
    n = len(rows)
    r = row_echelon_z(rows)
    if r < n:
        return 0
    d = 1
    # echelon is upper triangular w.r.t. pivot columns in order
    cols = []
    for row in rows[:r]:
        for c, v in enumerate(row):
            if v:
                cols.append(c)
                d *= v
                break
    return abs(d)


def in_row_lattice(basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    """Membership of v in the integer row span of an echelon basis."""
    v = list(v)
    for row in basis:
        c = next((i for i, x in enumerate(row) if x), None)
        if c is None:
            continue
        if v[c] % row[c] == 0:
            q = v[c] // row[c]
            if q:
                v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


def int_kernel(A: Sequence[Sequence[int]]) -> List[List[int]]:
    """Basis of the saturated integer kernel {x in Z^n : A x = 0}."""
    m = len(A)
    n = len(A[0])
    rows = []
    for i in range(n):
        rows.append([A[j][i] for j in range(m)] + [1 if k == i else 0 for k in range(n)])
    r = row_echelon_z(rows, ncols=m)
    out = []
    for row in rows[r:]:
        if any(row[:m]):
            raise InternalIdentityViolation("echelon left nonzero head")
        out.append(row[m:])
    return out


def gram_matrix(basis: Sequence[Sequence[int]]):
    return [[sum(x * y for x, y in zip(u, v)) for v in basis] for u in basis]


def _int_det(mat) -> int:
    n = len(mat)
    if n == 0:
        return 1
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    out = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = mat[0][j] * _int_det(minor)
        out += term if j % 2 == 0 else -term
    return out


def gram_det(basis: Sequence[Sequence[int]]) -> int:
    return _int_det(gram_matrix(basis))


@dataclass(frozen=True)
class IntLattice:
    basis: Tuple[Tuple[int, ...], ...]
    rank: int
    gram_det: int

    @staticmethod
    def from_basis(basis: Sequence[Sequence[int]]) -> "IntLattice":
        g = gram_det(basis)
        if g == 0 and basis:
            raise SingularBasis("dependent basis vectors")
        return IntLattice(tuple(tuple(b) for b in basis), len(basis), g)


# ----------------------------------------------------------------------
# structure constants and the diamond product


@dataclass(frozen=True)
class StructureConstants:
    """lam[i][j][k]: nu_i nu_j = sum_k lam[i][j][k] nu_k (all indices 0-based).

    T4_int is the denominator-cleared matrix of the map d -> fourth diamond
    coordinate row, with T4_scale recording the cleared denominator.
    """

    minpoly: Tuple[int, ...]
    basis: Tuple[Tuple[Fraction, ...], ...]
    lam: Tuple[Tuple[Tuple[Fraction, ...], ...], ...]
    T4_int: Tuple[Tuple[int, ...], ...]
    T4_scale: int


def _poly_mulmod(u: Sequence[Fraction], v: Sequence[Fraction], minpoly: Sequence[int]):
    """Product of two power-basis coordinate vectors modulo the monic
    quartic minpoly (low-to-high integer coefficients, length 5)."""
    prod = [Fraction(0)] * 7
    for i, x in enumerate(u):
        if x:
            for j, y in enumerate(v):
                prod[i + j] += x * y
    for k in (6, 5, 4):
        c = prod[k]
        if c:
            prod[k] = Fraction(0)
            for i in range(4):
                prod[k - 4 + i] -= c * minpoly[i]
    return prod[:4]


def _mat_inverse(rows):
    n = len(rows)
    aug = [[Fraction(x) for x in rows[i]] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    r = 0
    for c in range(n):
        p = next((i for i in range(r, n) if aug[i][c]), None)
        if p is None:
            return None
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        r += 1
    return [row[n:] for row in aug]


def structure_constants(minpoly: Sequence[int], basis_in_powers) -> StructureConstants:
    """lam_{ijk} for an order basis given by rational coordinate vectors in
    the power basis of the monic integer quartic minpoly."""
    mp = [int(c) for c in minpoly]
    if len(mp) != 5 or mp[4] != 1:
        raise ValueError("minpoly must be a monic quartic, low-to-high coeffs")
    B = [[Fraction(x) for x in row] for row in basis_in_powers]
    if len(B) != 4 or any(len(r) != 4 for r in B):
        raise ValueError("basis must be 4 vectors of length 4")
    Binv = _mat_inverse([list(col) for col in zip(*B)])  # inverse of B^T
    if Binv is None:
        raise SingularBasis("basis vectors are dependent")
    lam = [[[Fraction(0)] * 4 for _ in range(4)] for _ in range(4)]
    for i in range(4):
        for j in range(i, 4):
            prod = _poly_mulmod(B[i], B[j], mp)
            coords = [sum(Binv[k][l] * prod[l] for l in range(4)) for k in range(4)]
            for k in range(4):
                lam[i][j][k] = coords[k]
                lam[j][i][k] = coords[k]
    den = 1
    for i in range(4):
        for j in range(4):
            q = lam[i][j][3].denominator
            den = den // gcd(den, q) * q
    T4 = tuple(
        tuple(int(lam[i][j][3] * den) for j in range(4)) for i in range(4)
    )
    return StructureConstants(
        tuple(mp),
        tuple(tuple(r) for r in B),
        tuple(tuple(tuple(row) for row in plane) for plane in lam),
        T4,
        den,
    )


def diamond(d: Sequence[int], e: Sequence[int], sc: StructureConstants):
    """Coordinates of (sum d_i nu_i)(sum e_j nu_j) in the nu basis."""
    out = [Fraction(0)] * 4
    lam = sc.lam
    for i in range(4):
        if not d[i]:
            continue
        for j in range(4):
            if not e[j]:
                continue
            f = d[i] * e[j]
            plane = lam[i][j]
            for k in range(4):
                if plane[k]:
                    out[k] += f * plane[k]
    return tuple(out)


def T_vector(d: Sequence[int], sc: StructureConstants) -> Tuple[int, ...]:
    """Denominator-cleared T(d): j-th entry sum_i lam_{ij4} d_i."""
    return tuple(
        sum(sc.T4_int[i][j] * d[i] for i in range(4)) for j in range(4)
    )


def _content(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def lattice_Ld(d: Sequence[int], sc: StructureConstants):
    """(IntLattice of rank 3, T(d), shortest vector) for the kernel
    {e : (d <> e)_4 = 0}; verifies det^2 * content(T)^2 = |T|^2."""
    if not any(d):
        raise DegenerateDirection("d = 0")
    T = T_vector(d, sc)
    if not any(T):
        raise DegenerateDirection(f"T({d}) = 0; multiplication map degenerate")
    basis = int_kernel([list(T)])
    lat = IntLattice.from_basis(basis)
    if lat.rank != 3:
        raise InternalIdentityViolation("kernel of a nonzero form must have rank 3")
    ct = _content(T)
    if lat.gram_det * ct * ct != sum(t * t for t in T):
        raise InternalIdentityViolation("det(Lambda_d)^2 != (|T|/content)^2")
    z1 = shortest_vector(lat)
    return lat, T, z1


def wedge_data(b1: Sequence[int], b2: Sequence[int]):
    """(wedge_sq, D): sum of squares and gcd of the six 2x2 minors of the
    4x2 matrix with columns b1, b2."""
    minors = []
    for i in range(4):
        for j in range(i + 1, 4):
            minors.append(b1[i] * b2[j] - b1[j] * b2[i])
    return sum(m * m for m in minors), _content(minors)


def lattice_Lb1b2(b1: Sequence[int], b2: Sequence[int], sc: StructureConstants):
    """(IntLattice rank 2, wedge_sq, D) for {x : (x<>b1)_4 = (x<>b2)_4 = 0};
    verifies gram_det * D^2 = wedge_sq (valid for X^4+c0-type power bases)."""
    wedge_sq, D = wedge_data(b1, b2)
    if wedge_sq == 0:
        raise Collinear("b1, b2 are collinear")
    rows = [list(T_vector(b1, sc)), list(T_vector(b2, sc))]
    basis = int_kernel(rows)
    lat = IntLattice.from_basis(basis)
    if lat.rank != 2:
        raise InternalIdentityViolation("pair kernel must have rank 2")
    if lat.gram_det * D * D != wedge_sq:
        raise InternalIdentityViolation(
            f"gram_det*D^2 = {lat.gram_det * D * D} != wedge_sq = {wedge_sq}"
        )
    return lat, wedge_sq, D


# ----------------------------------------------------------------------
# shortest vectors


def _canon_sign(v: Tuple[int, ...]) -> Tuple[int, ...]:
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def _pair_reduce(basis: List[List[int]]):
    """Greedy integer pair-reduction (exact Gauss/Lagrange steps)."""
    changed = True
    guard = 0
    while changed and guard < 1000:
        changed = False
        guard += 1
        for i in range(len(basis)):
            for j in range(len(basis)):
                if i == j:
                    continue
                bj2 = sum(x * x for x in basis[j])
                if bj2 == 0:
                    continue
                dot = sum(x * y for x, y in zip(basis[i], basis[j]))
                t = (2 * dot + bj2) // (2 * bj2) if dot >= 0 else -((-2 * dot + bj2) // (2 * bj2))
                if t:
                    cand = [x - t * y for x, y in zip(basis[i], basis[j])]
                    if sum(x * x for x in cand) < sum(x * x for x in basis[i]):
                        basis[i] = cand
                        changed = True
    basis.sort(key=lambda b: sum(x * x for x in b))
    return basis


def shortest_vector(L: IntLattice) -> Tuple[int, ...]:
    """A nonzero vector of minimal euclidean norm; deterministic tie-break:
    sign-normalized, lexicographically largest among the minima."""
    if L.rank == 0:
        raise EmptyLattice("rank-0 lattice")
    basis = _pair_reduce([list(b) for b in L.basis])
    r = len(basis)
    best_n2 = sum(x * x for x in basis[0])
    G = gram_matrix(basis)
    det = _int_det(G)
    Ginv_scaled = _adjugate(G)  # G^{-1} * det
    bounds = []
    for i in range(r):
        bb = Ginv_scaled[i][i] * best_n2
        bounds.append(isqrt(max(0, bb // det)) + 1)
    total = 1
    for b in bounds:
        total *= 2 * b + 1
    if total > 5_000_000:
        raise TooLarge(f"enumeration box of {total} points")
    best = None
    best_key = None
    ranges = [range(-b, b + 1) for b in bounds]

    def rec(idx, coeffs):
        nonlocal best, best_key, best_n2
        if idx == r:
            if all(c == 0 for c in coeffs):
                return
            v = [0, 0, 0, 0]
            for c, b in zip(coeffs, basis):
                if c:
                    for k in range(4):
                        v[k] += c * b[k]
            n2 = sum(x * x for x in v)
            if n2 == 0:
                return
            vv = _canon_sign(tuple(v))
            key = (n2, tuple(-x for x in vv))
            if best_key is None or key < best_key:
                best, best_key, best_n2 = vv, key, n2
            return
        for c in ranges[idx]:
            rec(idx + 1, coeffs + [c])

    rec(0, [])
    return best


def _adjugate(G):
    n = len(G)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [G[a][b] for b in range(n) if b != j] for a in range(n) if a != i
            ]
            out[j][i] = _int_det(minor) * (-1) ** (i + j)
    return out


def power_basis_sc(minpoly: Sequence[int]) -> StructureConstants:
    """Structure constants of the power basis 1, theta, theta^2, theta^3."""
    eye = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
    return structure_constants(minpoly, eye)
