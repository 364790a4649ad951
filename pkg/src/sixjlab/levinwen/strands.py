"""Planar diagrams as matrices on fusion trees.

A row of strands ``A = (a1, ..., an)`` is represented by the spaces
``Hom(a1 ... an, c)`` for all simple ``c``, with the left-nested tree basis
``z0 = 1, t_k: z_{k-1} a_k -> z_k``.  A morphism ``f: A -> B`` acts on them by
precomposition, ``T o f = sum_T' M[T, T'] T'``, and ``M`` determines ``f``.
Composition is matrix multiplication: ``M(f o g) = M(f) @ M(g)``.

Four elementary pieces generate every diagram used here: a fusion vertex, a
splitting vertex (the dual basis vector), a cap and a cup.  Fusion uses F,
splitting uses ``inv(F)`` together with the dual-basis normalization
``b o a_bar = sqrt(a1 a2 / c)``.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

__all__ = ['StrandEngine', 'Diagram']

Tree = tuple[tuple[int, int], ...]


class StrandEngine:
    """Elementary diagram matrices for one set of F-data.

    `F` and `Finv` map ``(u, v, w, x)`` to the F-matrix and its inverse in the
    row/column layout of :mod:`sixjlab.catcore`, unit legs included.
    """

    def __init__(self, N: np.ndarray, dims: np.ndarray, unit: int,
                 F: Mapping, Finv: Mapping):
        self.N = np.asarray(N)
        self.dims = np.asarray(dims, dtype=float)
        self.unit = unit
        self.rank = len(dims)
        self.F = F
        self.Finv = Finv
        self._pos = {}
        self.trees = lru_cache(maxsize=None)(self._trees)
        self.fuse = lru_cache(maxsize=None)(self._fuse)
        self.split = lru_cache(maxsize=None)(self._split)
        self.cap = lru_cache(maxsize=None)(self._cap)
        self.cup = lru_cache(maxsize=None)(self._cup)

    @classmethod
    def from_category(cls, cat) -> 'StrandEngine':
        return cls(cat.N, cat.dims, cat.unit, cat.F, {q: np.linalg.inv(M) for q, M in cat.F.items()})

    # -- bases -------------------------------------------------------------

    def _trees(self, A: tuple[int, ...]) -> tuple[list[Tree], dict]:
        out: list[Tree] = [()]
        for a in A:
            nxt = []
            for t in out:
                z = t[-1][0] if t else self.unit
                for z2 in range(self.rank):
                    for m in range(self.N[z, a, z2]):
                        nxt.append(t + ((z2, m),))
            out = nxt
        return out, {t: i for i, t in enumerate(out)}

    def top(self, A, tree: Tree) -> int:
        return tree[-1][0] if tree else self.unit

    def _entry(self, q, row, col, inverse=False) -> complex:
        if q not in self._pos:
            from ..catcore import col_basis, row_basis
            self._pos[q] = ({r: i for i, r in enumerate(row_basis(self.N, *q))},
                            {c: i for i, c in enumerate(col_basis(self.N, *q))})
        rp, cp = self._pos[q]
        if inverse:
            return self.Finv[q][cp[row], rp[col]]
        return self.F[q][rp[row], cp[col]]

    # -- elementary pieces -------------------------------------------------

    def _fuse(self, A: tuple[int, ...], i: int, alpha: int, b: int) -> np.ndarray:
        """Fusion vertex ``alpha: A[i] A[i+1] -> b``."""
        v, w = A[i], A[i + 1]
        B = A[:i] + (b,) + A[i + 2:]
        tb, _ = self.trees(B)
        ta, ia = self.trees(A)
        M = np.zeros((len(tb), len(ta)), dtype=complex)
        for r, T in enumerate(tb):
            u = T[i - 1][0] if i else self.unit
            x, beta = T[i]
            q = (u, v, w, x)
            for z in range(self.rank):
                for g in range(self.N[u, v, z]):
                    for d in range(self.N[z, w, x]):
                        c = self._entry(q, (z, g, d), (b, alpha, beta))
                        if c != 0:
                            M[r, ia[T[:i] + ((z, g), (x, d)) + T[i + 1:]]] += c
        return M

    def _split(self, A: tuple[int, ...], i: int, alpha: int, v: int, w: int) -> np.ndarray:
        """Splitting vertex, the dual of ``alpha: v w -> A[i]``."""
        b = A[i]
        B = A[:i] + (v, w) + A[i + 1:]
        tb, _ = self.trees(B)
        ta, ia = self.trees(A)
        norm = np.sqrt(self.dims[v] * self.dims[w] / self.dims[b])
        M = np.zeros((len(tb), len(ta)), dtype=complex)
        for r, T in enumerate(tb):
            u = T[i - 1][0] if i else self.unit
            z, g = T[i]
            x, d = T[i + 1]
            q = (u, v, w, x)
            for beta in range(self.N[u, b, x]):
                c = self._entry(q, (b, alpha, beta), (z, g, d), inverse=True)
                if c != 0:
                    M[r, ia[T[:i] + ((x, beta),) + T[i + 2:]]] += norm * c
        return M

    def _unit_strand(self, A: tuple[int, ...], i: int) -> np.ndarray:
        """Matrix of the unitor ``A -> A`` with a unit strand inserted at ``i``."""
        B = A[:i] + (self.unit,) + A[i:]
        tb, _ = self.trees(B)
        ta, ia = self.trees(A)
        M = np.zeros((len(tb), len(ta)), dtype=complex)
        for r, T in enumerate(tb):
            if T[i][1] == 0 and T[i][0] == (T[i - 1][0] if i else self.unit):
                M[r, ia[T[:i] + T[i + 1:]]] = 1.0
        return M

    def _cap(self, A: tuple[int, ...], i: int) -> np.ndarray:
        if A[i] != A[i + 1]:
            raise ValueError('cap needs equal neighbouring strands')
        rest = A[:i] + A[i + 2:]
        # removing a unit strand is the transpose of inserting one
        return self._unit_strand(rest, i).T @ self.fuse(A, i, 0, self.unit)

    def _cup(self, A: tuple[int, ...], i: int, a: int) -> np.ndarray:
        with_unit = A[:i] + (self.unit,) + A[i:]
        return self.split(with_unit, i, 0, a, a) @ self._unit_strand(A, i)

    # -- evaluation ----------------------------------------------------------

    def trace(self, A: tuple[int, ...], M: np.ndarray) -> complex:
        """Categorical trace of an endomorphism of ``A`` given by its matrix."""
        trees, _ = self.trees(A)
        w = np.array([self.dims[self.top(A, t)] for t in trees])
        return complex(np.dot(w, np.diag(M)))

    def trace_weights(self, A: tuple[int, ...]) -> np.ndarray:
        trees, _ = self.trees(A)
        return np.array([self.dims[self.top(A, t)] for t in trees])

    def diagram(self, strands: Sequence[int]) -> 'Diagram':
        return Diagram(self, tuple(strands))


class Diagram:
    """A morphism built bottom to top from elementary pieces."""

    def __init__(self, engine: StrandEngine, strands: tuple[int, ...]):
        self.engine = engine
        self.source = strands
        self.strands = strands
        n = len(engine.trees(strands)[0])
        self.matrix = np.eye(n, dtype=complex)

    def _push(self, M, strands):
        self.matrix = M @ self.matrix
        self.strands = strands
        return self

    def fuse(self, i: int, alpha: int, b: int) -> 'Diagram':
        A = self.strands
        return self._push(self.engine.fuse(A, i, alpha, b), A[:i] + (b,) + A[i + 2:])

    def split(self, i: int, alpha: int, v: int, w: int) -> 'Diagram':
        A = self.strands
        return self._push(self.engine.split(A, i, alpha, v, w), A[:i] + (v, w) + A[i + 1:])

    def cap(self, i: int) -> 'Diagram':
        A = self.strands
        return self._push(self.engine.cap(A, i), A[:i] + A[i + 2:])

    def cup(self, i: int, a: int) -> 'Diagram':
        A = self.strands
        return self._push(self.engine.cup(A, i, a), A[:i] + (a, a) + A[i:])

    def scalar(self) -> complex:
        """Value of a closed diagram."""
        if self.source or self.strands:
            raise ValueError('diagram is not closed')
        return complex(self.matrix[0, 0])
