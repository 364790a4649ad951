"""Vertex and plaquette operators, the Hamiltonian and its certification.

States are admissible labelings: a simple label on every edge and a basis
index on every vertex.  A plaquette operator only touches the six inner edges
and six corners of its hexagon, so its matrix is assembled from a local
hexagon matrix that depends on the six outer legs alone.

Two independent evaluations of the local matrix are provided.

``contraction``
    ``<S'|B_P|S> = chi(S, S') / (D^2 sqrt(abcdef))`` where ``chi`` is the
    closed network obtained by gluing the hexagon of ``S`` to the mirror image
    of the hexagon of ``S'`` along the six outer legs; ``a..f`` are the leg
    dimensions.  The network is evaluated from the (+) and (-) 6j tables.
``moves``
    ``B^s_P`` from the loop-fusion sequence: the ``s`` loop is merged into each
    inner edge by completeness, ``id = sum sqrt(i'/(i s)) mu_bar mu``, and the
    six triangles left at the corners are reduced to new vertices.  This path
    reads F directly.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..catcore import CategoryData, total_dim_sq
from ..sixj import (HypothesisError, SixJTable, compute_minus, compute_plus, reconstruct_F,
                    reconstruct_Finv)
from ..verify import VerificationReport, check_unitarity
from .patch import INNER, OUTER, POSITIONS, HoneycombPatch, Plaquette
from .strands import StrandEngine

__all__ = ['State', 'PlaquetteOperator', 'LocalHexagon', 'enumerate_states', 'build_EI',
           'build_BsP', 'build_BP', 'build_H', 'certify', 'spectrum', 'dump_operator',
           'FULL_SPACE_EDGE_LIMIT', 'Tables', 'tables_for']

FULL_SPACE_EDGE_LIMIT = 8

# vertex slot roles per corner, in (a, b, c) order of Hom(a b, c)
_CORNER = {
    'T': ('i_UL_T', 'i_T_UR', 'o_T'),
    'UR': ('i_T_UR', 'o_UR', 'i_right'),
    'LR': ('i_LR_B', 'o_LR', 'i_right'),
    'B': ('i_B_LL', 'i_LR_B', 'o_B'),
    'LL': ('o_LL', 'i_B_LL', 'i_left'),
    'UL': ('o_UL', 'i_UL_T', 'i_left'),
}
# inner edges where the loop sits to the right of the edge, read upwards
_LEFT_SIDE = ('i_B_LL', 'i_left', 'i_UL_T')


@dataclass(frozen=True)
class State:
    """Edge labels (in sorted edge order) and vertex indices (sorted vertex order)."""
    labels: tuple[int, ...]
    indices: tuple[int, ...]


@dataclass
class PlaquetteOperator:
    name: str
    basis: list[State]
    matrix: np.ndarray
    edges: list[str] = field(default_factory=list)
    vertices: list[str] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class Tables:
    plus: SixJTable
    minus: SixJTable


def tables_for(cat: CategoryData) -> Tables:
    return Tables(compute_plus(cat), compute_minus(cat))


def _require_unitary(cat: CategoryData, allow_nonunitary: bool):
    if allow_nonunitary:
        return
    rep = check_unitarity(cat)
    if not rep.passed:
        raise HypothesisError(f'plaquette operators need unitary F-data; {rep}')


# ---------------------------------------------------------------------------
# states


def _vertex_dim(cat, patch, vid, lab):
    v = patch.vertices[vid]
    return int(cat.N[lab[v.a], lab[v.b], lab[v.c]])


def enumerate_states(patch: HoneycombPatch, cat: CategoryData) -> list[State]:
    """All admissible labelings in canonical order (edge labels, then vertex indices)."""
    edges = patch.edges
    verts = sorted(patch.vertices)
    fixed = {e: cat.lid(name) for e, name in patch.boundary.items()}
    free = [e for e in edges if e not in fixed]
    # check a vertex as soon as its last edge is assigned
    order = {e: i for i, e in enumerate(free)}
    ready: dict[int, list[str]] = {}
    for vid in verts:
        last = max((order[e] for e in patch.vertices[vid].slots if e in order), default=-1)
        ready.setdefault(last, []).append(vid)
    lab = dict(fixed)
    for vid in ready.get(-1, []):
        if _vertex_dim(cat, patch, vid, lab) == 0:
            return []
    out = []

    def rec(k):
        if k == len(free):
            labels = tuple(lab[e] for e in edges)
            ranges = [range(_vertex_dim(cat, patch, vid, lab)) for vid in verts]
            for idx in itertools.product(*ranges):
                out.append(State(labels, idx))
            return
        e = free[k]
        for x in range(cat.rank):
            lab[e] = x
            if all(_vertex_dim(cat, patch, vid, lab) for vid in ready.get(k, [])):
                rec(k + 1)
        del lab[e]

    rec(0)
    out.sort(key=lambda s: (s.labels, s.indices))
    return out


# ---------------------------------------------------------------------------
# local hexagon


class LocalHexagon:
    """Local plaquette matrices for one category, cached by outer-leg labels."""

    def __init__(self, cat: CategoryData, tables: Tables | None = None):
        self.cat = cat
        self.D2 = total_dim_sq(cat)
        tables = tables or tables_for(cat)
        self.table_engine = StrandEngine(cat.N, cat.dims, cat.unit, reconstruct_F(tables.plus),
                                         reconstruct_Finv(tables.minus))
        self.f_engine = StrandEngine.from_category(cat)
        self._states = {}
        self._contraction = {}
        self._moves = {}
        self.triangle = lru_cache(maxsize=None)(self._triangle)

    # -- local basis -------------------------------------------------------

    def states(self, outer: tuple[int, ...]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """Local states ``(inner labels in INNER order, indices in POSITIONS order)``."""
        if outer in self._states:
            return self._states[outer]
        N = self.cat.N
        lab = dict(zip(OUTER, outer))
        out = []
        for inner in itertools.product(range(self.cat.rank), repeat=6):
            lab.update(zip(INNER, inner))
            dims = [int(N[tuple(lab[r] for r in _CORNER[p])]) for p in POSITIONS]
            if all(dims):
                for idx in itertools.product(*map(range, dims)):
                    out.append((inner, idx))
        self._states[outer] = out
        return out

    # -- contraction route ---------------------------------------------------

    @staticmethod
    def _hexagon(engine, lab, idx):
        """The hexagon as a morphism from legs (LL, B, LR) to legs (UL, T, UR)."""
        d = engine.diagram((lab['o_LL'], lab['o_B'], lab['o_LR']))
        d.split(1, idx['B'], lab['i_B_LL'], lab['i_LR_B'])
        d.fuse(0, idx['LL'], lab['i_left'])
        d.fuse(1, idx['LR'], lab['i_right'])
        d.split(0, idx['UL'], lab['o_UL'], lab['i_UL_T'])
        d.split(2, idx['UR'], lab['i_T_UR'], lab['o_UR'])
        d.fuse(1, idx['T'], lab['o_T'])
        return d.matrix

    @staticmethod
    def _mirror(engine, lab, idx):
        """Mirror image of the hexagon: fusion and splitting vertices exchanged."""
        d = engine.diagram((lab['o_UL'], lab['o_T'], lab['o_UR']))
        d.split(1, idx['T'], lab['i_UL_T'], lab['i_T_UR'])
        d.fuse(2, idx['UR'], lab['i_right'])
        d.fuse(0, idx['UL'], lab['i_left'])
        d.split(1, idx['LR'], lab['i_LR_B'], lab['o_LR'])
        d.split(0, idx['LL'], lab['o_LL'], lab['i_B_LL'])
        d.fuse(1, idx['B'], lab['o_B'])
        return d.matrix

    def chi(self, outer, engine=None) -> np.ndarray:
        """``chi[S', S]`` over the local basis for the given outer legs."""
        engine = engine or self.table_engine
        states = self.states(outer)
        bottom = (outer[OUTER.index('o_LL')], outer[OUTER.index('o_B')],
                  outer[OUTER.index('o_LR')])
        w = engine.trace_weights(bottom)
        H, M = [], []
        for inner, idx in states:
            lab = dict(zip(OUTER, outer))
            lab.update(zip(INNER, inner))
            ix = dict(zip(POSITIONS, idx))
            H.append(self._hexagon(engine, lab, ix))
            M.append(self._mirror(engine, lab, ix))
        if not states:
            return np.zeros((0, 0), dtype=complex)
        return np.einsum('pbt,stb,b->ps', np.array(M), np.array(H), w)

    def contraction(self, outer) -> np.ndarray:
        """Local ``B_P`` from the closed-network formula."""
        if outer not in self._contraction:
            norm = self.D2 * np.sqrt(np.prod([self.cat.dims[o] for o in outer]))
            self._contraction[outer] = self.chi(outer) / norm
        return self._contraction[outer]

    # -- move route ----------------------------------------------------------

    def _triangle(self, pos, old, new, beta, s, mu_in, mu_out) -> np.ndarray:
        """Coefficients of the corner triangle in the new vertex basis.

        `old` and `new` are the (a, b, c) labels of the corner before and after,
        `mu_in`/`mu_out` the fusion indices on the two inner edges meeting
        there (edge order as in the loop of edges below).
        """
        E = self.f_engine
        a, b, c = old
        a2, b2, c2 = new
        out = np.zeros(int(self.cat.N[a2, b2, c2]), dtype=complex)
        for nb in range(len(out)):
            if pos == 'B':          # split o_B; loop enters via a cup
                d = E.diagram((c,)).split(0, beta, a, b).cup(1, s)
                d.fuse(0, mu_in, a2).fuse(1, mu_out, b2).fuse(0, nb, c)
            elif pos == 'T':        # loop leaves via a cap
                d = E.diagram((c,)).split(0, nb, a2, b2)
                d.split(0, mu_in, a, s).split(2, mu_out, s, b).cap(1).fuse(0, beta, c)
            elif pos == 'LL':
                d = E.diagram((c2,)).split(0, nb, a, b2).split(1, mu_in, b, s)
                d.fuse(0, beta, c).fuse(0, mu_out, c2)
            elif pos == 'UL':
                d = E.diagram((c2,)).split(0, mu_in, c, s).split(0, beta, a, b)
                d.fuse(1, mu_out, b2).fuse(0, nb, c2)
            elif pos == 'LR':
                d = E.diagram((c2,)).split(0, nb, a2, b).split(0, mu_in, s, a)
                d.fuse(1, beta, c).fuse(0, mu_out, c2)
            else:                   # UR
                d = E.diagram((c2,)).split(0, mu_in, s, c).split(1, beta, a, b)
                d.fuse(0, mu_out, a2).fuse(0, nb, c2)
            m = d.matrix[0, 0]
            out[nb] = m * np.sqrt(self.cat.dims[c2] / (self.cat.dims[a2] * self.cat.dims[b2]))
        return out

    # edge order around the hexagon and the corners between consecutive edges
    _RING = ('i_B_LL', 'i_left', 'i_UL_T', 'i_T_UR', 'i_right', 'i_LR_B')
    # corner -> (incoming edge, outgoing edge) as used by _triangle
    _CORNER_EDGES = {
        'B': ('i_B_LL', 'i_LR_B'), 'T': ('i_UL_T', 'i_T_UR'), 'LL': ('i_B_LL', 'i_left'),
        'UL': ('i_left', 'i_UL_T'), 'LR': ('i_LR_B', 'i_right'), 'UR': ('i_right', 'i_T_UR'),
    }

    def _mu_dim(self, edge, i, s, i2):
        N = self.cat.N
        return int(N[i, s, i2] if edge in _LEFT_SIDE else N[s, i, i2])

    def moves(self, outer, s: int) -> np.ndarray:
        """Local ``B^s_P[S', S]`` from the loop-fusion sequence."""
        key = (outer, s)
        if key in self._moves:
            return self._moves[key]
        states = self.states(outer)
        pos_of = {st: k for k, st in enumerate(states)}
        by_inner: dict[tuple, list[tuple]] = {}
        for inner, idx in states:
            by_inner.setdefault(inner, []).append(idx)
        d = self.cat.dims
        M = np.zeros((len(states), len(states)), dtype=complex)
        for inner, idxs in by_inner.items():
            for inner2, idxs2 in by_inner.items():
                old = dict(zip(OUTER, outer))
                old.update(zip(INNER, inner))
                new = dict(zip(OUTER, outer))
                new.update(zip(INNER, inner2))
                mu = {e: self._mu_dim(e, old[e], s, new[e]) for e in INNER}
                if not all(mu.values()):
                    continue
                weight = np.prod([np.sqrt(d[new[e]] / (d[old[e]] * d[s])) for e in INNER])
                for idx in idxs:
                    ix = dict(zip(POSITIONS, idx))
                    # corner tensors over (mu_in, mu_out, new index)
                    tens = {}
                    for p in POSITIONS:
                        e_in, e_out = self._CORNER_EDGES[p]
                        o = tuple(old[r] for r in _CORNER[p])
                        n = tuple(new[r] for r in _CORNER[p])
                        T = np.zeros((mu[e_in], mu[e_out], int(self.cat.N[n])), dtype=complex)
                        for m1, m2 in itertools.product(range(mu[e_in]), range(mu[e_out])):
                            T[m1, m2] = self.triangle(p, o, n, ix[p], s, m1, m2)
                        tens[p] = T
                    # mu letters: B_LL=a, left=b, UL_T=c, T_UR=d, right=e, LR_B=f
                    full = np.einsum('afB,abL,bcU,cdT,edR,feW->TRWBLU', tens['B'], tens['LL'],
                                     tens['UL'], tens['T'], tens['UR'], tens['LR'])
                    # axes are in POSITIONS order (T, UR, LR, B, LL, UL)
                    col = pos_of[(inner, idx)]
                    for idx2 in idxs2:
                        M[pos_of[(inner2, idx2)], col] = weight * full[idx2]
        self._moves[key] = M
        return M

    def moves_total(self, outer) -> np.ndarray:
        return sum(self.cat.dims[s] / self.D2 * self.moves(outer, s) for s in range(self.cat.rank))


# ---------------------------------------------------------------------------
# global operators


class _PlaquetteMap:
    """Global states grouped by everything outside one plaquette."""

    def __init__(self, patch: HoneycombPatch, p: Plaquette, basis: list[State]):
        edges = patch.edges
        verts = sorted(patch.vertices)
        roles = patch.roles(p)
        e_pos = {e: i for i, e in enumerate(edges)}
        v_pos = {v: i for i, v in enumerate(verts)}
        inner = [e_pos[roles[r]] for r in INNER]
        outer = [e_pos[roles[r]] for r in OUTER]
        corners = [v_pos[p.corners[q]] for q in POSITIONS]
        out_e = [i for i in range(len(edges)) if i not in inner]
        out_v = [i for i in range(len(verts)) if i not in corners]
        self.groups: dict[tuple, list[int]] = {}
        self.local: list[tuple] = []
        self.outer: list[tuple] = []
        for k, st in enumerate(basis):
            key = (tuple(st.labels[i] for i in out_e), tuple(st.indices[i] for i in out_v))
            self.groups.setdefault(key, []).append(k)
            self.local.append((tuple(st.labels[i] for i in inner),
                               tuple(st.indices[i] for i in corners)))
            self.outer.append(tuple(st.labels[i] for i in outer))


def _assemble(patch, p, basis, local_matrix) -> np.ndarray:
    pm = _PlaquetteMap(patch, p, basis)
    M = np.zeros((len(basis), len(basis)), dtype=complex)
    for members in pm.groups.values():
        outer = pm.outer[members[0]]
        L, index = local_matrix(outer)
        loc = [index[pm.local[k]] for k in members]
        M[np.ix_(members, members)] = L[np.ix_(loc, loc)]
    return M


def _local(hexes: LocalHexagon, fn):
    def get(outer):
        states = hexes.states(outer)
        return fn(outer), {st: k for k, st in enumerate(states)}
    return get


def _plaquette(patch, P):
    return P if isinstance(P, Plaquette) else patch.plaquette(P)


def build_BsP(patch: HoneycombPatch, cat: CategoryData, tables: Tables | None, P, s,
              basis: list[State] | None = None, hexes: LocalHexagon | None = None,
              allow_nonunitary: bool = False) -> PlaquetteOperator:
    """``B^s_P`` on the admissible basis (loop-fusion evaluation)."""
    _require_unitary(cat, allow_nonunitary)
    p = _plaquette(patch, P)
    s = cat.lid(s)
    basis = enumerate_states(patch, cat) if basis is None else basis
    hexes = hexes or LocalHexagon(cat, tables)
    M = _assemble(patch, p, basis, _local(hexes, lambda o: hexes.moves(o, s)))
    return PlaquetteOperator(f'B^{cat.lname(s)}_{p.id}', basis, M, patch.edges,
                             sorted(patch.vertices))


def build_BP(patch: HoneycombPatch, cat: CategoryData, tables: Tables | None, P,
             method: str = 'contraction', basis: list[State] | None = None,
             hexes: LocalHexagon | None = None, allow_nonunitary: bool = False
             ) -> PlaquetteOperator:
    """``B_P = sum_s (d_s / D^2) B^s_P``.

    ``method='contraction'`` evaluates the closed network from the 6j tables;
    ``method='moves'`` sums the loop-fusion ``B^s_P``.
    """
    _require_unitary(cat, allow_nonunitary)
    p = _plaquette(patch, P)
    basis = enumerate_states(patch, cat) if basis is None else basis
    hexes = hexes or LocalHexagon(cat, tables)
    if method == 'contraction':
        fn = hexes.contraction
    elif method == 'moves':
        fn = hexes.moves_total
    else:
        raise ValueError(f'unknown method {method!r}')
    M = _assemble(patch, p, basis, _local(hexes, fn))
    return PlaquetteOperator(f'B_{p.id}', basis, M, patch.edges, sorted(patch.vertices))


def _full_space(patch: HoneycombPatch, cat: CategoryData) -> list[State]:
    if cat.N.max() > 1:
        raise ValueError('full-space mode needs a multiplicity-free category')
    free = [e for e in patch.edges if e not in patch.boundary]
    if len(free) > FULL_SPACE_EDGE_LIMIT:
        raise ValueError(f'full-space mode is limited to {FULL_SPACE_EDGE_LIMIT} free edges')
    fixed = {e: cat.lid(n) for e, n in patch.boundary.items()}
    out = []
    for labs in itertools.product(range(cat.rank), repeat=len(free)):
        lab = {**fixed, **dict(zip(free, labs))}
        out.append(State(tuple(lab[e] for e in patch.edges), (0,) * len(patch.vertices)))
    return out


def build_EI(patch: HoneycombPatch, cat: CategoryData, vertex: str, full_space: bool = False
             ) -> PlaquetteOperator:
    """Vertex projector: 1 on labelings admissible at `vertex`, else 0."""
    basis = _full_space(patch, cat) if full_space else enumerate_states(patch, cat)
    e_pos = {e: i for i, e in enumerate(patch.edges)}
    v = patch.vertices[vertex]
    diag = [float(cat.N[st.labels[e_pos[v.a]], st.labels[e_pos[v.b]], st.labels[e_pos[v.c]]] > 0)
            for st in basis]
    return PlaquetteOperator(f'E_{vertex}', basis, np.diag(diag).astype(complex), patch.edges,
                             sorted(patch.vertices))


def _embed(op: PlaquetteOperator, basis: list[State]) -> np.ndarray:
    index = {st: k for k, st in enumerate(basis)}
    pos = [index[st] for st in op.basis]
    M = np.zeros((len(basis), len(basis)), dtype=complex)
    M[np.ix_(pos, pos)] = op.matrix
    return M


def build_H(patch: HoneycombPatch, cat: CategoryData, tables: Tables | None = None,
            full_space: bool = False, method: str = 'contraction',
            allow_nonunitary: bool = False) -> tuple[PlaquetteOperator, list[PlaquetteOperator]]:
    """``H = sum_P (1 - B_P)`` on the admissible basis; the full-space mode adds
    ``sum_I (1 - E_I)`` and extends each ``B_P`` by zero off the admissible
    subspace.  Returns ``H`` and the plaquette operators."""
    basis = enumerate_states(patch, cat)
    hexes = LocalHexagon(cat, tables)
    bps = [build_BP(patch, cat, tables, p, method, basis, hexes, allow_nonunitary)
           for p in patch.plaquettes]
    if not full_space:
        n = len(basis)
        H = sum((np.eye(n) - b.matrix for b in bps), np.zeros((n, n), dtype=complex))
        return PlaquetteOperator('H', basis, H, patch.edges, sorted(patch.vertices)), bps
    full = _full_space(patch, cat)
    n = len(full)
    H = np.zeros((n, n), dtype=complex)
    for vid in sorted(patch.vertices):
        H += np.eye(n) - build_EI(patch, cat, vid, full_space=True).matrix
    full_bps = []
    for b in bps:
        M = _embed(b, full)
        full_bps.append(PlaquetteOperator(b.name, full, M, b.edges, b.vertices))
        H += np.eye(n) - M
    return PlaquetteOperator('H', full, H, patch.edges, sorted(patch.vertices)), full_bps


# ---------------------------------------------------------------------------
# certification and reports


def _maxabs(M) -> float:
    return float(np.abs(M).max()) if np.size(M) else 0.0


def certify(patch: HoneycombPatch, cat: CategoryData, tables: Tables | None = None,
            tol: float = 1e-8, cross_check: bool = True, allow_nonunitary: bool = False
            ) -> list[VerificationReport]:
    """Projector, hermiticity, spectrum and commutation residuals for every
    plaquette, hermiticity of ``H``, and (optionally) agreement of the two
    evaluation routes."""
    t0 = time.perf_counter()
    H, bps = build_H(patch, cat, tables, allow_nonunitary=allow_nonunitary)
    reps = []

    def add(name, res, worst=''):
        reps.append(VerificationReport(name, res, tol, worst, time.perf_counter() - t0))

    for b in bps:
        B = b.matrix
        add(f'idempotent[{b.name}]', _maxabs(B @ B - B))
        add(f'hermitian[{b.name}]', _maxabs(B - B.conj().T))
        ev = np.linalg.eigvals(B) if len(B) else np.zeros(0)
        dist = np.minimum(np.abs(ev), np.abs(ev - 1))
        add(f'spectrum[{b.name}]', float(dist.max()) if len(dist) else 0.0)
    worst, where = 0.0, ''
    for b1, b2 in itertools.combinations(bps, 2):
        r = _maxabs(b1.matrix @ b2.matrix - b2.matrix @ b1.matrix)
        if r >= worst:
            worst, where = r, f'{b1.name},{b2.name}'
    if len(bps) > 1:
        add('commute', worst, where)
    add('hermitian[H]', _maxabs(H.matrix - H.matrix.conj().T))
    if cross_check:
        basis = H.basis
        hexes = LocalHexagon(cat, tables)
        res, where = 0.0, ''
        for p in patch.plaquettes:
            a = build_BP(patch, cat, tables, p, 'contraction', basis, hexes, allow_nonunitary)
            m = build_BP(patch, cat, tables, p, 'moves', basis, hexes, allow_nonunitary)
            r = _maxabs(a.matrix - m.matrix)
            if r >= res:
                res, where = r, p.id
        reps.append(VerificationReport('routes_agree', res, min(tol, 1e-10), where,
                                       time.perf_counter() - t0))
    return reps


def _clean(v: float) -> float:
    # keep roundoff around zero from printing as -0.00000000
    return 0.0 if abs(v) < 5e-9 else v


@dataclass
class Spectrum:
    eigenvalues: np.ndarray
    degeneracies: list[tuple[float, int]]

    @property
    def ground_energy(self) -> float:
        return _clean(self.degeneracies[0][0]) if self.degeneracies else float('nan')

    @property
    def ground_degeneracy(self) -> int:
        return self.degeneracies[0][1] if self.degeneracies else 0

    def record(self) -> str:
        parts = ' '.join(f'{_clean(v):.8f}x{n}' for v, n in self.degeneracies)
        return f'spectrum dim={len(self.eigenvalues)} levels={parts}'


def spectrum(op: PlaquetteOperator, tol: float = 1e-8) -> Spectrum:
    """Sorted eigenvalues of ``(M + M^dagger)/2`` grouped at tolerance `tol`."""
    M = op.matrix
    ev = np.linalg.eigvalsh((M + M.conj().T) / 2) if len(M) else np.zeros(0)
    groups: list[list[float]] = []
    for v in ev:
        if groups and v - groups[-1][0] <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return Spectrum(ev, [(float(np.mean(g)), len(g)) for g in groups])


def dump_operator(op: PlaquetteOperator, cat: CategoryData) -> str:
    """Dimension, basis manifest and row-major matrix as re/im pairs."""
    lines = [f'# operator {op.name}', f'dim {op.dim}',
             '# basis: edges ' + ' '.join(op.edges) + ' | vertices ' + ' '.join(op.vertices)]
    for k, st in enumerate(op.basis):
        labs = ' '.join(cat.lname(x) for x in st.labels)
        lines.append(f'state {k} {labs} | {" ".join(map(str, st.indices))}')
    for i in range(op.dim):
        lines.append(' '.join(f'{z.real:.17g} {z.imag:.17g}' for z in op.matrix[i]))
    return '\n'.join(lines) + '\n'
