"""Symmetrizing 6j-symbols: the obstruction for the category E, a gauge search,
and the explicit unitary normalization of E.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .catcore import CategoryData, GaugeTransform, apply_gauge, col_basis, row_basis
from .sixj import compute_minus, compute_plus, symbol_locations

__all__ = ['ObstructionWitness', 'GaugeSearchResult', 'WrongCategoryError', 'e_labels',
           'e_obstruction', 'proportionality_residual', 'search_symmetric_gauge',
           'tetrahedral_objective', 'normalize_E', 'normalization_gauge', 'GaugeFamily',
           'OBSTRUCTION_THRESHOLD']

OBSTRUCTION_THRESHOLD = 0.1


class WrongCategoryError(ValueError):
    pass


def e_labels(cat: CategoryData) -> tuple[int, int, int]:
    """Return ``(one, x, y)`` if `cat` has the fusion rules of E, else raise.

    E has simples ``1, x, y`` with ``x x = 1 + 2x + y``, ``x y = y x = x``, ``y y = 1``.
    """
    if cat.rank != 3:
        raise WrongCategoryError(f'{cat.name}: rank {cat.rank}, expected 3')
    one = cat.unit
    others = [i for i in range(3) if i != one]
    xs = [i for i in others if cat.N[i, i, i] == 2]
    if len(xs) != 1:
        raise WrongCategoryError(f'{cat.name}: no unique label with N[x,x,x] = 2')
    x = xs[0]
    y = next(i for i in others if i != x)
    expect = np.zeros((3, 3, 3), dtype=int)
    for a in range(3):
        expect[one, a, a] = expect[a, one, a] = 1
    expect[x, x, one] = expect[x, x, y] = 1
    expect[x, x, x] = 2
    expect[x, y, x] = expect[y, x, x] = expect[y, y, one] = 1
    if not np.array_equal(cat.N, expect):
        raise WrongCategoryError(f'{cat.name}: fusion rules differ from those of E')
    return one, x, y


# ---------------------------------------------------------------------------
# obstruction


def proportionality_residual(M1, M2) -> tuple[float, complex]:
    """``min_l |M1 - l M2|_F / |M1|_F`` and the minimizing ``l``.  Scale free."""
    M1 = np.asarray(M1, dtype=complex)
    M2 = np.asarray(M2, dtype=complex)
    lam = np.vdot(M2, M1) / np.vdot(M2, M2)
    return float(np.linalg.norm(M1 - lam * M2) / np.linalg.norm(M1)), complex(lam)


@dataclass
class ObstructionWitness:
    """Two constraint matrices that a symmetric normalization would force to be
    proportional.  ``prefactors`` are the scalars divided out to bring each to
    unit top-left entry; the unknown normalizations ``f``, ``f'`` can only
    rescale them, which is why the residual is scale free."""
    M1: np.ndarray
    M2: np.ndarray
    prefactors: tuple[complex, complex]
    residual: float
    lam: complex

    @property
    def certified(self) -> bool:
        return self.residual > OBSTRUCTION_THRESHOLD

    def record(self) -> str:
        def fmt(M):
            return '[' + ';'.join(' '.join(f'{z.real:+.6f}{z.imag:+.6f}i' for z in row)
                                  for row in M) + ']'
        return (f'obstruction residual={self.residual:.6f} certified={int(self.certified)} '
                f'M1={fmt(self.M1)} M2={fmt(self.M2)}')


def e_obstruction(cat: CategoryData, replace_m2=None) -> ObstructionWitness:
    """Constraint matrices from ``inv(F^x_{xxx})``.

    Setting the outer leg to ``1`` in the symmetry relation picks out the
    column of ``inv(F^x_{xxx})`` at the unit channel restricted to the four
    ``x``-channel rows; setting the other leg to ``1`` picks out the row at the
    unit channel restricted to the ``x``-channel columns.  Symmetry would make
    the two 2x2 arrays proportional.  `replace_m2` substitutes the second
    normalized matrix (self-test hook).
    """
    one, x, _ = e_labels(cat)
    q = (x, x, x, x)
    inv = np.linalg.inv(cat.F[q])
    rows = col_basis(cat.N, *q)     # rows of the inverse
    cols = row_basis(cat.N, *q)
    xr = [rows.index((x, a, b)) for a in range(2) for b in range(2)]
    xc = [cols.index((x, a, b)) for a in range(2) for b in range(2)]
    B1 = inv[xr, cols.index((one, 0, 0))].reshape(2, 2)
    B2 = inv[rows.index((one, 0, 0)), xc].reshape(2, 2)
    s1, s2 = B1[0, 0], B2[0, 0]
    M1, M2 = B1 / s1, B2 / s2
    if replace_m2 is not None:
        # taken as already normalized, so a multiple of M1 shows up in lam
        M2, s2 = np.asarray(replace_m2, dtype=complex), 1.0
    res, lam = proportionality_residual(M1, M2)
    return ObstructionWitness(M1, M2, (complex(s1), complex(s2)), res, lam)


# ---------------------------------------------------------------------------
# normalization of E


def normalization_gauge(cat: CategoryData) -> GaugeTransform:
    """The vertex rescaling that makes the F-matrices of E unitary.

    With ``d = dim x`` and ``v = sqrt d``: ``sqrt v`` on both ``(x,x;x)`` basis
    vectors and ``sqrt 2 d`` on the ``(x,x;1)`` cap and the ``(x,x;y)`` vertex.
    The matching splittings pick up the inverse factors automatically.
    """
    one, x, y = e_labels(cat)
    d = cat.dims[x]
    v = np.sqrt(d)
    g = GaugeTransform(cat.N, cat.unit)
    g[(x, x, x)] = np.sqrt(v) * np.eye(2)
    g[(x, x, one)] = np.sqrt(2) * d
    g[(x, x, y)] = np.sqrt(2) * d
    return g


def normalize_E(cat_raw: CategoryData) -> CategoryData:
    out = apply_gauge(cat_raw, normalization_gauge(cat_raw))
    return CategoryData(out.labels, out.unit, out.N, out.dims, out.F, name='E_normalized',
                        provenance=cat_raw.provenance + ' [normalized]')


# ---------------------------------------------------------------------------
# gauge search


def tetrahedral_objective(cat: CategoryData) -> float:
    """Sum of ``|{u v y(a b); w x z(c d)}_+ - {u v y(b a); w x z(c d)}_-|^2``."""
    plus, minus = compute_plus(cat), compute_minus(cat)
    total = 0.0
    for (u, v, y, w, x, z), (a, b, c, d), val in plus.entries():
        total += abs(val - minus.value(u, v, y, w, x, z, b, a, c, d)) ** 2
    return float(total)


def _unitary(p):
    phi, t, al, be = p
    c, s = np.cos(t), np.sin(t)
    return np.exp(1j * phi) * np.array([[c * np.exp(1j * al), s * np.exp(1j * be)],
                                        [-s * np.exp(-1j * be), c * np.exp(-1j * al)]])


class GaugeFamily:
    """Real coordinates on a class of gauges.

    ``scalar``: every vertex space gets ``exp(r + i p) * I``.  ``block``: 1-dim
    spaces as before, 2-dim spaces get ``U * T`` with ``U`` unitary (4
    coordinates) and ``T`` upper triangular with positive diagonal (4
    coordinates), which covers all of GL(2).
    """

    def __init__(self, cat: CategoryData, kind: str = 'block'):
        if kind not in ('scalar', 'block'):
            raise ValueError(f'unknown gauge class {kind!r}')
        self.kind = kind
        self.N = cat.N
        self.unit = cat.unit
        self.keys = [k for k in itertools.product(range(cat.rank), repeat=3)
                     if cat.N[k] and cat.unit not in k[:2]]
        self.slices = []
        n = 0
        for k in self.keys:
            m = int(cat.N[k])
            if kind == 'block' and m > 2:
                raise ValueError('block gauges support multiplicity at most 2')
            width = 8 if (kind == 'block' and m == 2) else 2
            self.slices.append(slice(n, n + width))
            n += width
        self.size = n

        scalar = [(k, sl) for k, sl in zip(self.keys, self.slices) if sl.stop - sl.start == 2]
        self.scalar_keys = [k for k, _ in scalar]
        self.scalar_r = np.array([sl.start for _, sl in scalar], dtype=int)
        self.scalar_p = self.scalar_r + 1
        self.block_keys = [k for k, sl in zip(self.keys, self.slices) if sl.stop - sl.start == 8]
        self.block_slices = [sl for sl in self.slices if sl.stop - sl.start == 8]

    @staticmethod
    def block_matrix(p) -> np.ndarray:
        T = np.array([[np.exp(p[4]), p[6] + 1j * p[7]], [0, np.exp(p[5])]])
        return _unitary(p[:4]) @ T

    def matrices(self, theta) -> list[np.ndarray]:
        out = []
        for k, sl in zip(self.keys, self.slices):
            p = theta[sl]
            m = int(self.N[k])
            if len(p) == 2:
                out.append(np.exp(p[0] + 1j * p[1]) * np.eye(m))
            else:
                out.append(self.block_matrix(p))
        return out

    def gauge(self, theta) -> GaugeTransform:
        return GaugeTransform(self.N, self.unit, dict(zip(self.keys, self.matrices(theta))))


class _FastObjective:
    """Vectorized condition-(a) objective as a function of gauge coordinates.

    Under a gauge ``F' = P F Q`` and ``inv(F') = inv(Q) inv(F) inv(P)``, where
    ``P``, ``inv(Q)`` are built from inverse vertex matrices and ``Q``,
    ``inv(P)`` from the forward ones.  Every entry that enters the objective is
    expanded once into terms ``coef * inv[i1] inv[i2] fwd[j1] fwd[j2]`` over a
    flat vector holding all vertex matrices, so one evaluation is a handful of
    gathers and a segmented sum.
    """

    def __init__(self, cat: CategoryData, family: GaugeFamily):
        self.family = family
        N = cat.N
        self.slot = {}
        size = 0
        for k in itertools.product(range(cat.rank), repeat=3):
            if N[k]:
                self.slot[k] = size
                size += int(N[k]) ** 2
        base = np.zeros(size, dtype=complex)
        for k, s in self.slot.items():
            base[s:s + int(N[k]) ** 2] = np.eye(int(N[k])).ravel()
        self.base = base
        pos, rep = [], []
        for k in family.scalar_keys:
            m = int(N[k])
            pos.extend(self.slot[k] + i * m + i for i in range(m))
            rep.append(m)
        self.scalar_pos = np.array(pos, dtype=int)
        self.scalar_rep = np.array(rep, dtype=int)
        self.block_slots = [self.slot[k] for k in family.block_keys]

        def vidx(key, i, j):
            return self.slot[key] + i * int(N[key]) + j

        basis = {q: (row_basis(N, *q), col_basis(N, *q)) for q in cat.F}
        finv = {q: np.linalg.inv(M) for q, M in cat.F.items()}

        def gauged_entry(q, i, j):
            """Terms of ``F'[i, j]``: ``P[i,i'] F[i',j'] Q[j',j]``."""
            u, v, w, x = q
            rows, cols = basis[q]
            z, c, d = rows[i]
            y, a, b = cols[j]
            for i2, (z2, c2, d2) in enumerate(rows):
                if z2 != z:
                    continue
                for j2, (y2, a2, b2) in enumerate(cols):
                    if y2 != y or cat.F[q][i2, j2] == 0:
                        continue
                    yield (cat.F[q][i2, j2], vidx((u, v, z), c2, c), vidx((z, w, x), d2, d),
                           vidx((v, w, y), a, a2), vidx((u, y, x), b, b2))

        def gauged_inverse_entry(q, i, j):
            """Terms of ``inv(F')[i, j]``: ``inv(Q)[i,i'] inv(F)[i',j'] inv(P)[j',j]``."""
            u, v, w, x = q
            rows, cols = basis[q]
            y, a, b = cols[i]
            z, c, d = rows[j]
            for i2, (y2, a2, b2) in enumerate(cols):
                if y2 != y:
                    continue
                for j2, (z2, c2, d2) in enumerate(rows):
                    if z2 != z or finv[q][i2, j2] == 0:
                        continue
                    yield (finv[q][i2, j2], vidx((v, w, y), a2, a), vidx((u, y, x), b2, b),
                           vidx((u, v, z), c, c2), vidx((z, w, x), d, d2))

        minus = {(k, row, col): (q, fi, fj, pf)
                 for k, row, col, q, fi, fj, pf in symbol_locations(cat, '-')}
        coef, i1, i2, j1, j2, starts = [], [], [], [], [], []
        for k, row, col, q, fi, fj, pf in symbol_locations(cat, '+'):
            y, a, b = col
            mq, mi, mj, mpf = minus[(k, row, (y, b, a))]
            starts.append(len(coef))
            for sgn, terms in ((pf, gauged_entry(q, fi, fj)),
                               (-mpf, gauged_inverse_entry(mq, mi, mj))):
                for t in terms:
                    coef.append(sgn * t[0])
                    i1.append(t[1])
                    i2.append(t[2])
                    j1.append(t[3])
                    j2.append(t[4])
            if len(coef) == starts[-1]:
                starts.pop()        # both sides vanish identically
        self.coef = np.array(coef, dtype=complex)
        self.i1, self.i2, self.j1, self.j2 = (np.array(v, dtype=int) for v in (i1, i2, j1, j2))
        self.starts = np.array(starts, dtype=int)

    def _flats(self, theta):
        fam = self.family
        fwd = self.base.copy()
        inv = self.base.copy()
        c = np.exp(theta[fam.scalar_r] + 1j * theta[fam.scalar_p])
        fwd[self.scalar_pos] = np.repeat(c, self.scalar_rep)
        inv[self.scalar_pos] = np.repeat(1 / c, self.scalar_rep)
        for sl, k in zip(fam.block_slices, self.block_slots):
            A = fam.block_matrix(theta[sl])
            det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
            fwd[k:k + 4] = A.ravel()
            inv[k:k + 4] = np.array([A[1, 1], -A[0, 1], -A[1, 0], A[0, 0]]) / det
        return fwd, inv

    def __call__(self, theta) -> float:
        if not len(self.starts):
            return 0.0
        fwd, inv = self._flats(theta)
        terms = self.coef * inv[self.i1] * inv[self.i2] * fwd[self.j1] * fwd[self.j2]
        diff = np.add.reduceat(terms, self.starts)
        return float(np.vdot(diff, diff).real)


@dataclass
class GaugeSearchResult:
    gauge: GaugeTransform
    objective: float
    iterations: int
    converged: bool
    gauge_class: str = 'block'
    restarts: int = 0
    seed: int = 0
    history: list = field(default_factory=list)

    def record(self) -> str:
        return (f'search class={self.gauge_class} restarts={self.restarts} seed={self.seed} '
                f'iterations={self.iterations} objective={self.objective:.6e} '
                f'converged={str(self.converged).lower()}')


def _descend(f, theta, iterations, step=0.5, xtol=1e-10, ftol=0.0):
    """Coordinate-wise search with per-coordinate steps (grow on success, halve on failure)."""
    theta = theta.copy()
    fx = f(theta)
    steps = np.full(len(theta), step)
    for it in range(1, iterations + 1):
        for k in range(len(theta)):
            for sgn in (1.0, -1.0):
                trial = theta.copy()
                trial[k] += sgn * steps[k]
                ft = f(trial)
                if ft < fx:
                    theta, fx = trial, ft
                    steps[k] *= 1.5
                    break
            else:
                steps[k] *= 0.5
        if fx <= ftol or steps.max() < xtol:
            return theta, fx, it, True
    return theta, fx, iterations, False


def search_symmetric_gauge(cat: CategoryData, gauge_class: str = 'block', restarts: int = 20,
                           iterations: int = 500, seed: int = 0, ftol: float = 1e-28
                           ) -> GaugeSearchResult:
    """Minimize the condition-(a) objective over a class of gauges.

    Restart 0 starts at the identity gauge, the others at seeded random
    coordinates; each restart draws from its own spawned seed, so the result
    does not depend on the order in which restarts run.  ``converged`` means
    the best restart stopped at a local minimum (or at zero) before its budget
    ran out.
    """
    family = GaugeFamily(cat, gauge_class)
    f = _FastObjective(cat, family)
    zero = np.zeros(family.size)
    best = GaugeSearchResult(family.gauge(zero), f(zero), 0, False, gauge_class, restarts, seed)
    if restarts <= 0:
        return best
    total = 0
    best_theta = None
    for r, ss in enumerate(np.random.SeedSequence(seed).spawn(restarts)):
        start = zero if r == 0 else np.random.default_rng(ss).normal(0.0, 1.0, family.size)
        theta, fx, its, conv = _descend(f, start, iterations, ftol=ftol)
        total += its
        best.history.append(fx)
        if best_theta is None or fx < best.objective:
            best_theta, best.objective, best.converged = theta, fx, conv
    best.gauge = family.gauge(best_theta)
    best.iterations = total
    return best
