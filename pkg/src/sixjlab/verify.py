"""Numerical consistency checks for a loaded category."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .catcore import CategoryData, col_basis, perron_frobenius_dims, row_basis, total_dim_sq

__all__ = ['VerificationReport', 'check_pentagon', 'check_unitarity', 'check_inverse_data',
           'check_dim_consistency', 'check_det_modulus', 'PENTAGON_TOL', 'UNITARITY_TOL']

PENTAGON_TOL = 1e-9
UNITARITY_TOL = 1e-10


@dataclass
class VerificationReport:
    """Outcome of one check: ``passed`` iff ``residual <= tol``."""
    name: str
    residual: float
    tol: float
    worst: str = ''
    elapsed: float = 0.0
    violations: list = field(default_factory=list)
    note: str = ''

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol)

    def record(self, timing: bool = True) -> str:
        """One ``key=value`` line; timing is omitted for byte-stable output."""
        parts = [f'check={self.name}', f'pass={int(self.passed)}', f'residual={self.residual:.3e}',
                 f'tol={self.tol:.1e}', f'worst={self.worst or "-"}']
        if timing:
            parts.append(f'millis={1000 * self.elapsed:.1f}')
        if self.note:
            parts.append(f'note={self.note}')
        return ' '.join(parts)

    def __str__(self):
        status = 'PASS' if self.passed else 'FAIL'
        worst = f' at {self.worst}' if self.worst else ''
        return f'{status} {self.name}: residual {self.residual:.3e} (tol {self.tol:.0e}){worst}'


class _Worst:
    """Running maximum with its location."""

    def __init__(self):
        self.value = 0.0
        self.where = ''

    def update(self, value, where):
        if value > self.value:
            self.value = float(value)
            self.where = where() if callable(where) else where


class _Entries:
    """Entry lookup ``F[q][(z,g,d), (y,a,b)]`` returning 0 outside the support."""

    def __init__(self, cat: CategoryData):
        self.F = cat.F
        self.pos = {}
        for q in cat.F:
            self.pos[q] = ({r: i for i, r in enumerate(row_basis(cat.N, *q))},
                           {c: i for i, c in enumerate(col_basis(cat.N, *q))})

    def __call__(self, q, row, col) -> complex:
        p = self.pos.get(q)
        if p is None:
            return 0.0
        i = p[0].get(row)
        j = p[1].get(col)
        if i is None or j is None:
            return 0.0
        return self.F[q][i, j]


def _names(cat, idx):
    return '(' + ','.join(cat.lname(i) for i in idx) + ')'


def check_pentagon(cat: CategoryData, tol: float = PENTAGON_TOL) -> VerificationReport:
    """Compare the two re-association paths ``a(b(cd)) -> ((ab)c)d``.

    Two moves: ``a(b(cd)) -> (ab)(cd) -> ((ab)c)d`` gives
    ``sum_d' F^e_{abk}[(f,m1,d'),(l,n2,n3)] F^e_{fcd}[(g,m2,m3),(k,n1,d')]``.
    Three moves: ``a(b(cd)) -> a((bc)d) -> (a(bc))d -> ((ab)c)d`` gives
    ``sum F^l_{bcd}[(h,r1,r2),(k,n1,n2)] F^e_{ahd}[(g,s,m3),(l,r2,n3)]
    F^g_{abc}[(f,m1,m2),(h,r1,s)]``.
    Labels: ``c x d -> k`` (n1), ``b x k -> l`` (n2), ``a x l -> e`` (n3) on the
    right-nested side; ``a x b -> f`` (m1), ``f x c -> g`` (m2), ``g x d -> e`` (m3)
    on the left-nested side.
    """
    t0 = time.perf_counter()
    N = cat.N
    R = range(cat.rank)
    F = _Entries(cat)
    worst = _Worst()
    for a, b, c, d, e in itertools.product(R, repeat=5):
        for k, l, f, g in itertools.product(R, repeat=4):
            if not (N[c, d, k] and N[b, k, l] and N[a, l, e] and N[a, b, f] and N[f, c, g]
                    and N[g, d, e]):
                continue
            for n1, n2, n3, m1, m2, m3 in itertools.product(
                    range(N[c, d, k]), range(N[b, k, l]), range(N[a, l, e]),
                    range(N[a, b, f]), range(N[f, c, g]), range(N[g, d, e])):
                two = sum(F((a, b, k, e), (f, m1, x), (l, n2, n3))
                          * F((f, c, d, e), (g, m2, m3), (k, n1, x)) for x in range(N[f, k, e]))
                three = 0j
                for h in R:
                    for r1, r2, s in itertools.product(range(N[b, c, h]), range(N[h, d, l]),
                                                       range(N[a, h, g])):
                        three += (F((b, c, d, l), (h, r1, r2), (k, n1, n2))
                                  * F((a, h, d, e), (g, s, m3), (l, r2, n3))
                                  * F((a, b, c, g), (f, m1, m2), (h, r1, s)))
                worst.update(abs(two - three), lambda: _names(cat, (a, b, c, d, e)))
    return VerificationReport('pentagon', worst.value, tol, worst.where,
                              time.perf_counter() - t0)


def check_unitarity(cat: CategoryData, tol: float = UNITARITY_TOL) -> VerificationReport:
    t0 = time.perf_counter()
    worst = _Worst()
    for q, M in cat.F.items():
        worst.update(np.abs(M.conj().T @ M - np.eye(len(M))).max(), _names(cat, q))
    return VerificationReport('unitarity', worst.value, tol, worst.where, time.perf_counter() - t0)


def check_det_modulus(cat: CategoryData, tol: float = PENTAGON_TOL) -> VerificationReport:
    """``|det F| = 1`` for every F-matrix (implied by unitarity)."""
    t0 = time.perf_counter()
    worst = _Worst()
    for q, M in cat.F.items():
        worst.update(abs(abs(np.linalg.det(M)) - 1), _names(cat, q))
    return VerificationReport('det_modulus', worst.value, tol, worst.where,
                              time.perf_counter() - t0)


def check_inverse_data(cat: CategoryData, claimed_inverse, key, tol: float = PENTAGON_TOL
                       ) -> VerificationReport:
    """Both products of ``F[key]`` with a supplied inverse must be the identity."""
    t0 = time.perf_counter()
    key = cat.key(*key)
    F = cat.F[key]
    inv = np.asarray(claimed_inverse, dtype=complex)
    if inv.shape != F.shape:
        raise ValueError(f'claimed inverse has shape {inv.shape}, F{_names(cat, key)} is {F.shape}')
    eye = np.eye(len(F))
    res = max(np.abs(F @ inv - eye).max(), np.abs(inv @ F - eye).max())
    return VerificationReport('inverse' + _names(cat, key), float(res), tol, _names(cat, key),
                              time.perf_counter() - t0)


def check_dim_consistency(cat: CategoryData, tol: float = PENTAGON_TOL) -> VerificationReport:
    """``sum_t d_t N[s,f,t] = d_s d_f`` and ``sum_{s,t} d_s d_t N[s,t,f] = D^2 d_f``."""
    t0 = time.perf_counter()
    d = cat.dims
    N = cat.N.astype(float)
    worst = _Worst()
    lhs = np.einsum('sft,t->sf', N, d)
    dev = np.abs(lhs - np.outer(d, d))
    s, f = np.unravel_index(np.argmax(dev), dev.shape)
    worst.update(dev[s, f], _names(cat, (s, f)))
    D2 = total_dim_sq(cat)
    dev2 = np.abs(np.einsum('s,t,stf->f', d, d, N) - D2 * d)
    f = int(np.argmax(dev2))
    worst.update(dev2[f], f'sum->{cat.lname(f)}')
    return VerificationReport('dim_consistency', worst.value, tol, worst.where,
                              time.perf_counter() - t0)


def pf_total_dim_sq(cat: CategoryData) -> float:
    """``D^2`` from Perron-Frobenius dimensions; consistency oracle only."""
    return float(np.sum(perron_frobenius_dims(cat.N) ** 2))
