"""6j-symbols of both handednesses, G-matrices and their symmetry properties.

A symbol ``{u v y(a b); w x z(c d)}`` is stored in the block keyed by
``(u, v, w, x)``: column ``(y, a, b)``, row ``(z, c, d)``.  The Hom spaces
carried by the four basis indices depend on the sign:

=====  ================  ================  ================  ================
sign   a                 b                 c                 d
=====  ================  ================  ================  ================
``+``  ``Hom(u y, w)``   ``Hom(y x, v)``   ``Hom(w x, z)``   ``Hom(u v, z)``
``-``  ``Hom(y v, x)``   ``Hom(w y, u)``   ``Hom(w x, z)``   ``Hom(u v, z)``
=====  ================  ================  ================  ================

Both are read off the F-matrices:
``{+} = sqrt(d_y d_z / d_v d_w) F^z_{u y x}[(w,a,c), (v,b,d)]`` and
``{-} = sqrt(d_y d_z / d_u d_x) inv(F^z_{w y v})[(x,a,c), (u,b,d)]``.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .catcore import CategoryData, col_basis, row_basis
from .verify import UNITARITY_TOL, VerificationReport, check_unitarity

__all__ = ['SixJTable', 'GMatrixSet', 'SingularFMatrixError', 'HypothesisError', 'compute_plus',
           'compute_minus', 'compute_G', 'g_from_inverse', 'check_mirror_conjugate',
           'check_sixj_unitarity', 'check_loop_identity', 'check_tetrahedral',
           'reconstruct_F', 'reconstruct_Finv', 'minus_from_plus', 'dump_table', 'loop_coefficients', 'symbol_locations']

COND_LIMIT = 1e12
LOOP_TOL = 1e-9

Key4 = tuple[int, int, int, int]
Index3 = tuple[int, int, int]


class SingularFMatrixError(ValueError):
    pass


class HypothesisError(ValueError):
    """Raised when an operation needs unitary F-data and does not get it."""


@dataclass(frozen=True)
class Block:
    rows: tuple[Index3, ...]
    cols: tuple[Index3, ...]
    matrix: np.ndarray

    def entry(self, row: Index3, col: Index3) -> complex:
        try:
            return self.matrix[self.rows.index(row), self.cols.index(col)]
        except ValueError:
            return 0.0


class SixJTable:
    """Dense per-``(u, v, w, x)`` blocks of one family of 6j-symbols."""

    def __init__(self, sign: str, cat: CategoryData, blocks: Mapping[Key4, Block]):
        if sign not in '+-':
            raise ValueError('sign must be "+" or "-"')
        self.sign = sign
        self.cat = cat
        self.blocks = dict(blocks)

    def __getitem__(self, key: Key4) -> Block:
        return self.blocks[key]

    def value(self, u, v, y, w, x, z, a=0, b=0, c=0, d=0) -> complex:
        """``{u v y(a b); w x z(c d)}``; zero when any Hom space is empty."""
        k = self.cat.key(u, v, w, x)
        blk = self.blocks.get(k)
        if blk is None:
            return 0.0
        return blk.entry((self.cat.lid(z), c, d), (self.cat.lid(y), a, b))

    def items(self) -> Iterator[tuple[Key4, Block]]:
        return iter(sorted(self.blocks.items()))

    def entries(self):
        """Yield ``((u,v,y,w,x,z), (a,b,c,d), value)`` for every stored symbol."""
        for (u, v, w, x), blk in self.items():
            for i, (z, c, d) in enumerate(blk.rows):
                for j, (y, a, b) in enumerate(blk.cols):
                    yield (u, v, y, w, x, z), (a, b, c, d), blk.matrix[i, j]

    def replaced(self, blocks: Mapping[Key4, np.ndarray]) -> 'SixJTable':
        """Copy with some block matrices swapped out (test mutations)."""
        new = dict(self.blocks)
        for k, m in blocks.items():
            old = new[k]
            new[k] = Block(old.rows, old.cols, np.asarray(m, dtype=complex))
        return SixJTable(self.sign, self.cat, new)


def _index_sets(N, sign, u, v, w, x):
    R = range(N.shape[0])
    if sign == '+':
        cols = [(y, a, b) for y in R for a in range(N[u, y, w]) for b in range(N[y, x, v])]
    else:
        cols = [(y, a, b) for y in R for a in range(N[y, v, x]) for b in range(N[w, y, u])]
    rows = [(z, c, d) for z in R for c in range(N[w, x, z]) for d in range(N[u, v, z])]
    return rows, cols


def _positions(cat, q):
    return ({r: i for i, r in enumerate(row_basis(cat.N, *q))},
            {c: i for i, c in enumerate(col_basis(cat.N, *q))})


def symbol_locations(cat: CategoryData, sign: str):
    """Where every symbol of one sign lives in the F-data.

    Yields ``(block, row, col, q, fi, fj, prefactor)``: the symbol in row
    ``(z, c, d)`` and column ``(y, a, b)`` of block ``(u, v, w, x)`` equals ``prefactor * X[q][fi, fj]`` with ``X = F``
    for ``+`` and ``X = inv(F)`` for ``-``.
    """
    N = cat.N
    d = cat.dims
    pos = {}
    for u, v, w, x in itertools.product(range(cat.rank), repeat=4):
        rows, cols = _index_sets(N, sign, u, v, w, x)
        if not rows and not cols:
            continue
        if len(rows) != len(cols):
            raise ValueError(f'6j block {(u, v, w, x)} is not square; labels must be self-dual')
        for y, a, b in cols:
            for z, c, dd in rows:
                if sign == '+':
                    q = (u, y, x, z)
                    pf = np.sqrt(d[y] * d[z] / (d[v] * d[w]))
                    rsel, csel = (w, a, c), (v, b, dd)
                else:
                    q = (w, y, v, z)
                    pf = np.sqrt(d[y] * d[z] / (d[u] * d[x]))
                    # rows of inv(F) are indexed like the columns of F
                    rsel, csel = (x, a, c), (u, b, dd)
                if q not in pos:
                    pos[q] = _positions(cat, q)
                rp, cp = pos[q]
                if sign == '+':
                    fi, fj = rp[rsel], cp[csel]
                else:
                    fi, fj = cp[rsel], rp[csel]
                yield (u, v, w, x), (z, c, dd), (y, a, b), q, fi, fj, pf


def _build(cat: CategoryData, sign: str) -> SixJTable:
    source = dict(cat.F)
    if sign == '-':
        for q, F in cat.F.items():
            if np.linalg.cond(F) > COND_LIMIT:
                raise SingularFMatrixError(f'F{q} is numerically singular')
            source[q] = np.linalg.inv(F)
    shapes = {}
    for u, v, w, x in itertools.product(range(cat.rank), repeat=4):
        rows, cols = _index_sets(cat.N, sign, u, v, w, x)
        if rows or cols:
            shapes[(u, v, w, x)] = (rows, cols)
    mats = {k: np.zeros((len(r), len(c)), dtype=complex) for k, (r, c) in shapes.items()}
    index = {k: ({r: i for i, r in enumerate(rs)}, {c: j for j, c in enumerate(cs)})
             for k, (rs, cs) in shapes.items()}
    for k, row, col, q, fi, fj, pf in symbol_locations(cat, sign):
        mats[k][index[k][0][row], index[k][1][col]] = pf * source[q][fi, fj]
    blocks = {k: Block(tuple(r), tuple(c), mats[k]) for k, (r, c) in shapes.items()}
    return SixJTable(sign, cat, blocks)


def compute_plus(cat: CategoryData) -> SixJTable:
    return _build(cat, '+')


def compute_minus(cat: CategoryData) -> SixJTable:
    return _build(cat, '-')


def minus_from_plus(plus: SixJTable, conjugate: bool = True) -> SixJTable:
    """The (-) table predicted by mirror symmetry from the (+) table.

    ``{w x y(b a); u v z(d c)}_- = conj {u v y(a b); w x z(c d)}_+``; with
    ``conjugate=False`` the conjugation is dropped (a deliberately wrong table).
    """
    cat = plus.cat
    shapes = {}
    for u, v, w, x in itertools.product(range(cat.rank), repeat=4):
        rows, cols = _index_sets(cat.N, '-', u, v, w, x)
        if rows or cols:
            shapes[(u, v, w, x)] = (rows, cols)
    blocks = {}
    for k, (rows, cols) in shapes.items():
        w, x, u, v = k
        M = np.zeros((len(rows), len(cols)), dtype=complex)
        for i, (z, dd, c) in enumerate(rows):
            for j, (y, b, a) in enumerate(cols):
                val = plus.value(u, v, y, w, x, z, a, b, c, dd)
                M[i, j] = np.conj(val) if conjugate else val
        blocks[k] = Block(tuple(rows), tuple(cols), M)
    return SixJTable('-', cat, blocks)


def reconstruct_F(plus: SixJTable) -> dict[Key4, np.ndarray]:
    """Invert the (+) formula: recover every F-matrix from the (+) table."""
    cat = plus.cat
    d = cat.dims
    F = {}
    for q in cat.F:
        u, y, x, z = q
        rows = row_basis(cat.N, *q)
        cols = col_basis(cat.N, *q)
        M = np.zeros((len(rows), len(cols)), dtype=complex)
        for i, (w, a, c) in enumerate(rows):
            for j, (v, b, dd) in enumerate(cols):
                M[i, j] = plus.value(u, v, y, w, x, z, a, b, c, dd) * np.sqrt(
                    d[v] * d[w] / (d[y] * d[z]))
        F[q] = M
    return F


def reconstruct_Finv(minus: SixJTable) -> dict[Key4, np.ndarray]:
    """Invert the (-) formula: ``inv(F^X_{UVW})[(Y,a,c),(Z,b,d)]`` equals
    ``{Z W V(a b); U Y X(c d)}_- * sqrt(d_Z d_Y / d_V d_X)``."""
    cat = minus.cat
    d = cat.dims
    out = {}
    for q in cat.F:
        U, V, W, X = q
        rows = col_basis(cat.N, *q)
        cols = row_basis(cat.N, *q)
        M = np.zeros((len(rows), len(cols)), dtype=complex)
        for i, (Y, a, c) in enumerate(rows):
            for j, (Z, b, dd) in enumerate(cols):
                M[i, j] = minus.value(Z, W, V, U, Y, X, a, b, c, dd) * np.sqrt(
                    d[Z] * d[Y] / (d[V] * d[X]))
        out[q] = M
    return out


# ---------------------------------------------------------------------------
# G-matrices


@dataclass
class GMatrixSet:
    """Splitting-tree associativity; rows ``(z, delta, gamma)``, columns ``(y, beta, alpha)``."""
    cat: CategoryData
    G: dict

    def __getitem__(self, key):
        return self.G[self.cat.key(*key)]


def _swap_perm(idx: list[Index3]) -> np.ndarray:
    swapped = [(t[0], t[2], t[1]) for t in idx]
    order = sorted(range(len(idx)), key=lambda i: swapped[i])
    return np.array(order, dtype=int)


def _as_G(cat: CategoryData, Gt: Mapping[Key4, np.ndarray]) -> GMatrixSet:
    """Reorder ``Gt[(z,c,d),(y,a,b)]`` into the ``(z,d,c)``/``(y,b,a)`` layout."""
    G = {}
    for q, M in Gt.items():
        pr = _swap_perm(row_basis(cat.N, *q))
        pc = _swap_perm(col_basis(cat.N, *q))
        G[q] = M[np.ix_(pr, pc)]
    return GMatrixSet(cat, G)


def compute_G(cat: CategoryData, tol: float = UNITARITY_TOL) -> GMatrixSet:
    """``G^{uvw}_x[(z,d,c),(y,b,a)] = conj F^x_{uvw}[(z,c,d),(y,a,b)]``.

    Valid only for unitary F-data; anything else is refused.
    """
    rep = check_unitarity(cat, tol)
    if not rep.passed:
        raise HypothesisError(f'G = conj(F) needs unitary F-matrices; {rep}')
    return _as_G(cat, {q: M.conj() for q, M in cat.F.items()})


def g_from_inverse(cat: CategoryData) -> GMatrixSet:
    """G from duality alone: ``sum F[r,c'] G~[r,c] = delta`` gives ``G~ = inv(F)^T``."""
    return _as_G(cat, {q: np.linalg.inv(M).T for q, M in cat.F.items()})


# ---------------------------------------------------------------------------
# checks


def _names(cat, labels):
    return '(' + ','.join(cat.lname(i) for i in labels) + ')'


def check_mirror_conjugate(plus: SixJTable, minus: SixJTable, tol: float = 1e-10
                           ) -> VerificationReport:
    """``{w x y(b a); u v z(d c)}_- = conj {u v y(a b); w x z(c d)}_+``."""
    t0 = time.perf_counter()
    cat = plus.cat
    res, where = 0.0, ''
    for (u, v, y, w, x, z), (a, b, c, d), val in plus.entries():
        dev = abs(minus.value(w, x, y, u, v, z, b, a, d, c) - np.conj(val))
        if dev > res:
            res, where = float(dev), _names(cat, (u, v, y, w, x, z)) + f'[{a}{b}{c}{d}]'
    for (u, v, y, w, x, z), (a, b, c, d), val in minus.entries():
        # symbols present only in the (-) table
        if plus.value(w, x, y, u, v, z, b, a, d, c) == 0 and abs(val) > res:
            res, where = float(abs(val)), _names(cat, (u, v, y, w, x, z)) + f'[{a}{b}{c}{d}]-'
    return VerificationReport('mirror_conjugate', res, tol, where, time.perf_counter() - t0)


def check_sixj_unitarity(table: SixJTable, tol: float = 1e-10) -> VerificationReport:
    t0 = time.perf_counter()
    res, where = 0.0, ''
    for k, blk in table.items():
        M = blk.matrix
        dev = np.abs(M.conj().T @ M - np.eye(len(M))).max()
        if dev > res:
            res, where = float(dev), _names(table.cat, k)
    return VerificationReport(f'sixj_unitarity{table.sign}', res, tol, where,
                              time.perf_counter() - t0)


def loop_coefficients(cat: CategoryData, plus: SixJTable, g, g2, t) -> np.ndarray:
    """Coefficients ``C_t(c, d)`` of the loop-removal identity.

    ``C = d_g' sum_{s,e,f} {g g s(e f); g' g' 1}_+ conj {g g s(e f); g' g' t(d c)}_+``,
    returned as an array indexed ``[c, d]`` with ``c < N[g', g', t]`` (the
    third basis slot) and ``d < N[g, g, t]``.
    """
    g, g2, t = cat.key(g, g2, t)
    blk = plus.blocks.get((g, g, g2, g2))
    out = np.zeros((cat.N[g2, g2, t], cat.N[g, g, t]), dtype=complex)
    if blk is None:
        return out
    top = blk.rows.index((cat.unit, 0, 0))
    for i, (z, c, d) in enumerate(blk.rows):
        if z == t:
            out[c, d] = cat.dims[g2] * np.vdot(blk.matrix[i], blk.matrix[top])
    return out


def check_loop_identity(cat: CategoryData, plus: SixJTable, tol: float = LOOP_TOL
                        ) -> VerificationReport:
    """``C_t = d_g'`` for the unit channel and 0 otherwise, for all ``g, g', t``."""
    t0 = time.perf_counter()
    res, where = 0.0, ''
    for g, g2, t in itertools.product(range(cat.rank), repeat=3):
        C = loop_coefficients(cat, plus, g, g2, t)
        expect = np.zeros_like(C)
        if t == cat.unit and C.size:
            expect[0, 0] = cat.dims[g2]
        if C.size:
            dev = np.abs(C - expect).max()
            if dev > res:
                res, where = float(dev), _names(cat, (g, g2, t))
    return VerificationReport('loop_identity', res, tol, where, time.perf_counter() - t0)


def _tetra_images(u, v, y, w, x, z):
    """Generators of the tetrahedral group acting on ``{u v y; w x z}``.

    Each image carries the dimension prefactor that multiplies it.
    """
    return [((v, u, y, x, w, z), None),
            ((x, w, y, v, u, z), None),
            ((y, x, w, u, z, v), 'yz/vw')]


def check_tetrahedral(plus: SixJTable, minus: SixJTable, tol: float = 1e-10
                      ) -> VerificationReport:
    """Symmetrizability: (a) ``{.. y(a b) ..}_+ = {.. y(b a) ..}_-`` everywhere and
    (b) the generator relations on multiplicity-free symbols."""
    t0 = time.perf_counter()
    cat = plus.cat
    d = cat.dims
    violations = []
    # (a)
    for labels, (a, b, c, dd), val in plus.entries():
        u, v, y, w, x, z = labels
        other = minus.value(u, v, y, w, x, z, b, a, c, dd)
        dev = abs(val - other)
        if dev > tol:
            violations.append(('a', _names(cat, labels) + f'[{a}{b}{c}{dd}]', float(dev)))
    for labels, (a, b, c, dd), val in minus.entries():
        u, v, y, w, x, z = labels
        if plus.value(u, v, y, w, x, z, b, a, c, dd) == 0 and abs(val) > tol:
            violations.append(('a', _names(cat, labels) + f'[{b}{a}{c}{dd}]', float(abs(val))))
    # (b)
    N = cat.N
    for labels, idx, val in plus.entries():
        u, v, y, w, x, z = labels
        if max(N[u, y, w], N[y, x, v], N[w, x, z], N[u, v, z]) != 1:
            continue
        for img, factor in _tetra_images(*labels):
            other = plus.value(*img)
            if factor:
                other *= np.sqrt(d[y] * d[z] / (d[v] * d[w]))
            dev = abs(val - other)
            if dev > tol:
                violations.append(('b', _names(cat, labels) + '->' + _names(cat, img), float(dev)))
    res = max((v[2] for v in violations), default=0.0)
    worst = max(violations, key=lambda v: v[2])[1] if violations else ''
    conds = sorted({v[0] for v in violations})
    note = 'violated=' + ','.join(conds) if conds else ''
    return VerificationReport('tetrahedral', res, tol, worst, time.perf_counter() - t0,
                              violations=violations, note=note)


def dump_table(table: SixJTable) -> str:
    """Text dump: six label names, four basis indices, re and im at 17 digits."""
    cat = table.cat
    lines = [f'# sign={table.sign} category={cat.name}', '# u v y w x z a b c d re im']
    for labels, idx, val in table.entries():
        names = ' '.join(cat.lname(i) for i in labels)
        lines.append(f'{names} {" ".join(map(str, idx))} {val.real:.17g} {val.imag:.17g}')
    return '\n'.join(lines) + '\n'
