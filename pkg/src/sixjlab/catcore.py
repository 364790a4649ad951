"""Coefficient-level data model for a spherical fusion category.

A category is described by its simple labels, the fusion multiplicities
``N[a, b, c] = dim Hom(a x b, c)``, quantum dimensions and one F-matrix per
admissible quadruple ``(u, v, w; x)``.

F-matrix layout.  ``F[(u, v, w, x)]`` re-expresses the tree
``u x (v x w -> y) -> x`` (vertices alpha, beta) in terms of the trees
``(u x v -> z) x w -> x`` (vertices gamma, delta).  Columns are indexed by
``(y, alpha, beta)`` with ``alpha < N[v, w, y]`` and ``beta < N[u, y, x]``;
rows by ``(z, gamma, delta)`` with ``gamma < N[u, v, z]`` and
``delta < N[z, w, x]``.  Both are sorted lexicographically by label id and
then by the basis indices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

import numpy as np
import yaml

from .expr import ExpressionError, evaluate

__all__ = [
    'Label', 'CategoryData', 'GaugeTransform', 'CategoryLoadError', 'CategoryParseError',
    'ShapeMismatchError', 'MissingFMatrixError', 'SingularGaugeError', 'load_category',
    'category_from_dict', 'bundled', 'BUNDLED', 'hom_dim', 'total_dim_sq', 'apply_gauge',
    'perron_frobenius_dims', 'row_basis', 'col_basis',
]

DATA_DIR = Path(__file__).parent / 'data'
BUNDLED = ('E_raw', 'E_normalized', 'Z2', 'trivial')

Quad = tuple[int, int, int, int]


class CategoryLoadError(ValueError):
    """Base class for everything that can go wrong while reading a category."""


class CategoryParseError(CategoryLoadError):
    pass


class ShapeMismatchError(CategoryLoadError):
    def __init__(self, msg: str, key=None):
        super().__init__(msg)
        self.key = key


class MissingFMatrixError(CategoryLoadError):
    def __init__(self, msg: str, key=None):
        super().__init__(msg)
        self.key = key


class SingularGaugeError(ValueError):
    pass


@dataclass(frozen=True)
class Label:
    id: int
    name: str

    def __str__(self):
        return self.name


def row_basis(N: np.ndarray, u: int, v: int, w: int, x: int) -> list[tuple[int, int, int]]:
    """Row index triples ``(z, gamma, delta)`` of ``F[(u, v, w, x)]``."""
    rank = N.shape[0]
    return [(z, g, d) for z in range(rank)
            for g in range(N[u, v, z]) for d in range(N[z, w, x])]


def col_basis(N: np.ndarray, u: int, v: int, w: int, x: int) -> list[tuple[int, int, int]]:
    """Column index triples ``(y, alpha, beta)`` of ``F[(u, v, w, x)]``."""
    rank = N.shape[0]
    return [(y, a, b) for y in range(rank)
            for a in range(N[v, w, y]) for b in range(N[u, y, x])]


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CategoryData:
    """Immutable bundle of fusion rules, dimensions and F-matrices.

    Labels are addressed by integer id everywhere; :meth:`lid` converts
    names.  Use :func:`load_category` or :func:`category_from_dict` to build
    validated instances.
    """
    labels: tuple[Label, ...]
    unit: int
    N: np.ndarray
    dims: np.ndarray
    F: Mapping[Quad, np.ndarray]
    name: str = ''
    provenance: str = ''
    inverses: Mapping[Quad, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'N', _freeze(np.asarray(self.N, dtype=int)))
        object.__setattr__(self, 'dims', _freeze(np.asarray(self.dims, dtype=float)))
        F = {tuple(int(i) for i in k): _freeze(np.asarray(m, dtype=complex))
             for k, m in self.F.items()}
        object.__setattr__(self, 'F', MappingProxyType(F))
        inv = {tuple(int(i) for i in k): _freeze(np.asarray(m, dtype=complex))
               for k, m in self.inverses.items()}
        object.__setattr__(self, 'inverses', MappingProxyType(inv))

    @property
    def rank(self) -> int:
        return len(self.labels)

    def lid(self, label) -> int:
        """Label id for a name, a :class:`Label` or an id."""
        if isinstance(label, Label):
            return label.id
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.rank:
                raise KeyError(f'label id {label} out of range')
            return int(label)
        for lab in self.labels:
            if lab.name == str(label):
                return lab.id
        raise KeyError(f'unknown label {label!r} in category {self.name!r}')

    def key(self, *labels) -> tuple[int, ...]:
        return tuple(self.lid(a) for a in labels)

    def lname(self, i: int) -> str:
        return self.labels[i].name

    def rows(self, u, v, w, x):
        return row_basis(self.N, *self.key(u, v, w, x))

    def cols(self, u, v, w, x):
        return col_basis(self.N, *self.key(u, v, w, x))

    def fmat(self, u, v, w, x) -> np.ndarray:
        return self.F[self.key(u, v, w, x)]

    def admissible_quads(self) -> list[Quad]:
        return [q for q in itertools.product(range(self.rank), repeat=4)
                if row_basis(self.N, *q)]

    def with_F(self, F: Mapping[Quad, np.ndarray], name: str | None = None) -> 'CategoryData':
        """Copy with a replaced F-matrix collection (shapes are re-checked)."""
        new = CategoryData(self.labels, self.unit, self.N, self.dims, dict(F),
                           name=self.name if name is None else name,
                           provenance=self.provenance, inverses=dict(self.inverses))
        _check_shapes(new)
        return new

    def with_dims(self, dims) -> 'CategoryData':
        return CategoryData(self.labels, self.unit, self.N, np.asarray(dims, float), dict(self.F),
                            name=self.name, provenance=self.provenance,
                            inverses=dict(self.inverses))

    def perturbed(self, key: Quad, index: tuple[int, int], delta: complex) -> 'CategoryData':
        F = dict(self.F)
        m = np.array(F[key])
        m[index] += delta
        F[key] = m
        return self.with_F(F)

    def __repr__(self):
        return f'CategoryData({self.name!r}, labels={[lab.name for lab in self.labels]})'


def hom_dim(cat: CategoryData, u, v, x) -> int:
    return int(cat.N[cat.key(u, v, x)])


def total_dim_sq(cat: CategoryData) -> float:
    """``D**2``, the sum of squared quantum dimensions."""
    return float(np.sum(cat.dims ** 2))


def perron_frobenius_dims(N: np.ndarray) -> np.ndarray:
    """Largest eigenvalue of each fusion matrix ``(N_a)_{bc} = N[a, b, c]``.

    Only used to cross-check the dimensions stated in data files.
    """
    N = np.asarray(N, dtype=float)
    out = np.empty(N.shape[0])
    for a in range(N.shape[0]):
        ev = np.linalg.eigvals(N[a])
        out[a] = np.max(ev.real)
    return out


# ---------------------------------------------------------------------------
# gauge transformations


class GaugeTransform:
    """Basis changes on the vertex spaces ``Hom(u x v, x)``.

    The new basis is ``w_i = sum_j A[i, j] v_j`` for ``A = self[(u, v, x)]``.
    Triples that are absent act as the identity.  Vertices with the unit as an
    input (``u`` or ``v``) are the canonical unitors and stay the identity;
    cap vertices ``Hom(a x a, 1)`` may be rescaled.
    """

    def __init__(self, N: np.ndarray, unit: int, mats: Mapping | None = None):
        self.N = np.asarray(N)
        self.unit = unit
        self._mats: dict[tuple[int, int, int], np.ndarray] = {}
        for k, m in (mats or {}).items():
            self[k] = m

    def __setitem__(self, key, mat):
        key = tuple(int(i) for i in key)
        n = int(self.N[key])
        mat = np.atleast_2d(np.asarray(mat, dtype=complex))
        if mat.shape != (n, n):
            raise ShapeMismatchError(f'gauge matrix for {key} must be {n}x{n}, got {mat.shape}', key)
        if self.unit in key[:2]:
            if not np.allclose(mat, np.eye(n)):
                raise ValueError(f'gauge on the unit vertex {key} is frozen to the identity')
            return
        self._mats[key] = mat

    def __getitem__(self, key) -> np.ndarray:
        key = tuple(int(i) for i in key)
        if key in self._mats:
            return self._mats[key]
        return np.eye(int(self.N[key]), dtype=complex)

    def items(self):
        return self._mats.items()

    def inverse(self) -> 'GaugeTransform':
        return GaugeTransform(self.N, self.unit, {k: np.linalg.inv(m) for k, m in self._mats.items()})

    @classmethod
    def identity(cls, cat: CategoryData) -> 'GaugeTransform':
        return cls(cat.N, cat.unit)

    @classmethod
    def random(cls, cat: CategoryData, rng: np.random.Generator, low=0.5, high=2.0):
        """Random gauge whose entries have modulus in ``[low, high]``."""
        g = cls(cat.N, cat.unit)
        for key in itertools.product(range(cat.rank), repeat=3):
            n = int(cat.N[key])
            if n == 0 or cat.unit in key[:2]:
                continue
            while True:
                m = rng.uniform(low, high, (n, n)) * np.exp(2j * np.pi * rng.random((n, n)))
                if np.linalg.cond(m) < 1e3:
                    break
            g[key] = m
        return g


def _block_transform(N, blocks, mats_of_label) -> np.ndarray:
    """Block-diagonal matrix over ``blocks``; ``mats_of_label(y)`` gives the two factors."""
    size = len(blocks)
    out = np.zeros((size, size), dtype=complex)
    start = 0
    labels = sorted(set(b[0] for b in blocks))
    for y in labels:
        n = sum(1 for b in blocks if b[0] == y)
        A, B = mats_of_label(y)
        out[start:start + n, start:start + n] = np.kron(A, B)
        start += n
    return out


def apply_gauge(cat: CategoryData, g: GaugeTransform) -> CategoryData:
    """Transform all F-matrices under the vertex basis change `g`.

    ``F'[(z,c,d),(y,a,b)] = sum A_vw^y[a,a0] A_uy^x[b,b0] F[(z,c0,d0),(y,a0,b0)]
    inv(A_uv^z)[c0,c] inv(A_zw^x)[d0,d]``.
    """
    inv = {}

    def ginv(key):
        if key not in inv:
            m = g[key]
            if m.size and np.linalg.cond(m) > 1e12:
                raise SingularGaugeError(f'gauge matrix on {key} is singular')
            inv[key] = np.linalg.inv(m) if m.size else m
        return inv[key]

    for key, m in g.items():
        ginv(key)
    F = {}
    for (u, v, w, x), M in cat.F.items():
        rows = row_basis(cat.N, u, v, w, x)
        cols = col_basis(cat.N, u, v, w, x)
        P = _block_transform(cat.N, rows, lambda z: (ginv((u, v, z)), ginv((z, w, x)))).T
        Q = _block_transform(cat.N, cols, lambda y: (g[(v, w, y)], g[(u, y, x)])).T
        F[(u, v, w, x)] = P @ M @ Q
    return CategoryData(cat.labels, cat.unit, cat.N, cat.dims, F, name=cat.name,
                        provenance=cat.provenance + ' [gauged]')


# ---------------------------------------------------------------------------
# loading


def _num(value, where: str) -> complex:
    try:
        return evaluate(value)
    except ExpressionError as err:
        raise CategoryParseError(f'{where}: {err}') from None


def _matrix(value, where: str) -> np.ndarray:
    if not isinstance(value, list):
        return np.array([[_num(value, where)]])
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list):
            row = [row]
        rows.append([_num(v, f'{where}[{i}][{j}]') for j, v in enumerate(row)])
    if len({len(r) for r in rows}) > 1:
        raise CategoryParseError(f'{where}: ragged matrix')
    return np.array(rows, dtype=complex)


def _check_shapes(cat: CategoryData):
    N = cat.N
    for q in itertools.product(range(cat.rank), repeat=4):
        nr = len(row_basis(N, *q))
        nc = len(col_basis(N, *q))
        names = ','.join(cat.lname(i) for i in q)
        if nr != nc:
            raise ShapeMismatchError(f'fusion rules are not associative at ({names})', q)
        if nr == 0:
            if q in cat.F:
                raise ShapeMismatchError(f'F-matrix given for inadmissible quadruple ({names})', q)
            continue
        if q not in cat.F:
            raise MissingFMatrixError(f'missing F-matrix for admissible quadruple ({names})', q)
        if cat.F[q].shape != (nr, nr):
            raise ShapeMismatchError(
                f'F-matrix ({names}) has shape {cat.F[q].shape}, expected {nr}x{nr}', q)
    for q, m in cat.inverses.items():
        nr = len(row_basis(N, *q))
        if m.shape != (nr, nr):
            raise ShapeMismatchError(f'inverse data {q} has shape {m.shape}, expected {nr}x{nr}', q)


def category_from_dict(doc: Mapping, source: str = '<dict>') -> CategoryData:
    """Build and validate a category from the parsed document structure."""
    if not isinstance(doc, Mapping):
        raise CategoryParseError(f'{source}: top level must be a mapping')
    names = doc.get('labels')
    if not isinstance(names, list) or not names:
        raise CategoryParseError(f'{source}: field "labels" must be a non-empty list')
    names = [str(n) for n in names]
    if len(set(names)) != len(names):
        raise CategoryParseError(f'{source}: duplicate label names')
    idx = {n: i for i, n in enumerate(names)}
    rank = len(names)

    def lab(n, where):
        if str(n) not in idx:
            raise CategoryParseError(f'{source}: {where}: unknown label {n!r}')
        return idx[str(n)]

    unit = lab(doc.get('unit', names[0]), 'unit')
    for a, b in (doc.get('duals') or {}).items():
        if lab(a, 'duals') != lab(b, 'duals'):
            raise CategoryParseError(f'{source}: only self-dual labels are supported ({a}* = {b})')

    N = np.zeros((rank, rank, rank), dtype=int)
    for a in range(rank):
        N[unit, a, a] = N[a, unit, a] = 1
    for k, entry in enumerate(doc.get('fusion') or []):
        where = f'fusion[{k}]'
        if not isinstance(entry, list) or len(entry) not in (3, 4):
            raise CategoryParseError(f'{source}: {where}: expected [a, b, c, N]')
        a, b, c = (lab(e, where) for e in entry[:3])
        n = int(entry[3]) if len(entry) == 4 else 1
        if n < 0:
            raise CategoryParseError(f'{source}: {where}: negative multiplicity')
        if unit in (a, b) and n != N[a, b, c]:
            raise CategoryParseError(f'{source}: {where}: violates the unit axiom')
        N[a, b, c] = n
    for a in range(rank):
        for b in range(rank):
            if N[a, b, unit] != (a == b):
                raise CategoryParseError(
                    f'{source}: labels must be self-dual: N[{names[a]},{names[b]},{names[unit]}]'
                    f' = {N[a, b, unit]}')

    dims_doc = doc.get('dims') or {}
    dims = np.ones(rank)
    for n, v in dims_doc.items():
        d = _num(v, f'{source}: dims[{n}]')
        if abs(d.imag) > 1e-12 or d.real <= 0:
            raise CategoryParseError(f'{source}: dims[{n}] must be a positive real number')
        dims[lab(n, 'dims')] = d.real
    if abs(dims[unit] - 1) > 1e-12:
        raise CategoryParseError(f'{source}: the unit must have dimension 1')

    def quad(entry, where):
        key = entry.get('key') if isinstance(entry, Mapping) else None
        if not isinstance(key, list) or len(key) != 4:
            raise CategoryParseError(f'{source}: {where}: "key" must be [u, v, w, x]')
        return tuple(lab(e, where) for e in key)

    F = {}
    for k, entry in enumerate(doc.get('fmatrices') or []):
        where = f'fmatrices[{k}]'
        q = quad(entry, where)
        if q in F:
            raise CategoryParseError(f'{source}: {where}: duplicate key')
        if 'matrix' not in entry:
            raise CategoryParseError(f'{source}: {where}: missing "matrix"')
        F[q] = _matrix(entry['matrix'], f'{source}: {where}.matrix')
    for q in itertools.product(range(rank), repeat=4):
        if unit in q[:3]:
            n = len(row_basis(N, *q))
            if n == 0:
                continue
            if q in F and not np.allclose(F[q], np.eye(n)):
                raise ShapeMismatchError(
                    f'{source}: F-matrix {q} with a unit leg must be the identity', q)
            F[q] = np.eye(n, dtype=complex)

    inverses = {}
    for k, entry in enumerate(doc.get('inverses') or []):
        where = f'inverses[{k}]'
        inverses[quad(entry, where)] = _matrix(entry.get('matrix'), f'{source}: {where}.matrix')

    cat = CategoryData(tuple(Label(i, n) for i, n in enumerate(names)), unit, N, dims, F,
                       name=str(doc.get('name', source)),
                       provenance=str(doc.get('provenance', '')), inverses=inverses)
    _check_shapes(cat)
    return cat


def load_category(path) -> CategoryData:
    """Read a category file (YAML layout, see the bundled files in ``data/``)."""
    path = Path(path)
    if not path.exists() and (DATA_DIR / f'{path}.yaml').exists():
        path = DATA_DIR / f'{path}.yaml'
    try:
        text = path.read_text()
    except OSError as err:
        raise CategoryLoadError(f'cannot read {path}: {err}') from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise CategoryParseError(f'{path}: {err}') from None
    return category_from_dict(doc, source=str(path))


def bundled(name: str) -> CategoryData:
    """One of the categories shipped with the package (see ``BUNDLED``)."""
    if name not in BUNDLED:
        raise KeyError(f'no bundled category {name!r}; choose from {BUNDLED}')
    return load_category(DATA_DIR / f'{name}.yaml')
