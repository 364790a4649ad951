"""Honeycomb patches: vertices, edges, plaquettes and boundary labels.

The lattice is drawn with vertical edges.  Every vertex is one of two kinds:

``Y``       two legs below (``a`` lower-left, ``b`` lower-right), one above (``c``);
            its state is a basis vector of ``Hom(a b, c)``.
``lambda``  one leg below (``c``), two above (``a`` upper-left, ``b`` upper-right);
            its state is the dual of a basis vector of ``Hom(a b, c)``.

A plaquette names its six corners ``T, UR, LR, B, LL, UL`` (top, then
clockwise).  T, LR and LL are ``Y`` vertices; UR, B and UL are ``lambda``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import yaml

__all__ = ['Vertex', 'Plaquette', 'HoneycombPatch', 'PatchError', 'POSITIONS', 'KIND_OF',
           'single_hexagon', 'two_hexagons', 'MIXED_LEGS', 'torus', 'single_vertex', 'load_patch', 'dump_patch']

POSITIONS = ('T', 'UR', 'LR', 'B', 'LL', 'UL')
KIND_OF = {'T': 'Y', 'UR': 'lambda', 'LR': 'Y', 'B': 'lambda', 'LL': 'Y', 'UL': 'lambda'}

# (position, slot) -> role; roles name the six inner edges and six outer legs
_SLOTS = {
    'T': {'a': 'i_UL_T', 'b': 'i_T_UR', 'c': 'o_T'},
    'UR': {'c': 'i_right', 'a': 'i_T_UR', 'b': 'o_UR'},
    'LR': {'a': 'i_LR_B', 'b': 'o_LR', 'c': 'i_right'},
    'B': {'c': 'o_B', 'a': 'i_B_LL', 'b': 'i_LR_B'},
    'LL': {'a': 'o_LL', 'b': 'i_B_LL', 'c': 'i_left'},
    'UL': {'c': 'i_left', 'a': 'o_UL', 'b': 'i_UL_T'},
}
INNER = ('i_UL_T', 'i_T_UR', 'i_right', 'i_LR_B', 'i_B_LL', 'i_left')
OUTER = ('o_T', 'o_UR', 'o_LR', 'o_B', 'o_LL', 'o_UL')


class PatchError(ValueError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str                # 'Y' or 'lambda'
    a: str
    b: str
    c: str

    @property
    def slots(self) -> tuple[str, str, str]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class Plaquette:
    id: str
    corners: Mapping[str, str]      # position -> vertex id


@dataclass
class HoneycombPatch:
    name: str
    vertices: dict[str, Vertex]
    plaquettes: list[Plaquette]
    boundary: dict[str, str] = field(default_factory=dict)   # leg -> label name

    def __post_init__(self):
        self.validate()

    # -- structure ---------------------------------------------------------

    @property
    def edges(self) -> list[str]:
        seen = []
        for v in self.vertices.values():
            for e in v.slots:
                if e not in seen:
                    seen.append(e)
        return sorted(seen)

    def incidence(self) -> dict[str, list[tuple[str, str]]]:
        inc: dict[str, list[tuple[str, str]]] = {}
        for v in self.vertices.values():
            for slot, e in zip('abc', v.slots):
                inc.setdefault(e, []).append((v.id, slot))
        return inc

    @property
    def legs(self) -> list[str]:
        """Edges with a single endpoint."""
        return sorted(e for e, ends in self.incidence().items() if len(ends) == 1)

    @property
    def inner_edges(self) -> list[str]:
        return sorted(e for e, ends in self.incidence().items() if len(ends) == 2)

    def roles(self, p: Plaquette) -> dict[str, str]:
        """Map the twelve role names of a plaquette to edge ids."""
        out = {}
        for pos, vid in p.corners.items():
            v = self.vertices[vid]
            for slot, e in zip('abc', v.slots):
                role = _SLOTS[pos][slot]
                if out.setdefault(role, e) != e:
                    raise PatchError(f'{self.name}: plaquette {p.id} is not closed at {role}')
        return out

    def validate(self):
        for v in self.vertices.values():
            if v.kind not in ('Y', 'lambda'):
                raise PatchError(f'{self.name}: vertex {v.id} has unknown kind {v.kind!r}')
        for e, ends in self.incidence().items():
            if len(ends) > 2:
                raise PatchError(f'{self.name}: edge {e} has {len(ends)} endpoints')
        for p in self.plaquettes:
            if set(p.corners) != set(POSITIONS):
                raise PatchError(f'{self.name}: plaquette {p.id} must list {POSITIONS}')
            if len(set(p.corners.values())) != 6:
                raise PatchError(f'{self.name}: plaquette {p.id} repeats a vertex')
            for pos, vid in p.corners.items():
                if vid not in self.vertices:
                    raise PatchError(f'{self.name}: plaquette {p.id} names unknown vertex {vid}')
                if self.vertices[vid].kind != KIND_OF[pos]:
                    raise PatchError(f'{self.name}: vertex {vid} cannot sit at {pos}')
            roles = self.roles(p)
            if len({roles[r] for r in INNER}) != 6:
                raise PatchError(f'{self.name}: plaquette {p.id} inner cycle is degenerate')
            for r in INNER:
                if len(self.incidence()[roles[r]]) != 2:
                    raise PatchError(f'{self.name}: inner edge {roles[r]} of {p.id} is a leg')
        legs = set(self.legs)
        missing = legs - set(self.boundary)
        if missing:
            raise PatchError(f'{self.name}: boundary legs without labels: {sorted(missing)}')
        extra = set(self.boundary) - legs
        if extra:
            raise PatchError(f'{self.name}: labels given for non-leg edges: {sorted(extra)}')

    def with_boundary(self, labels: Mapping[str, str] | str) -> 'HoneycombPatch':
        if isinstance(labels, str):
            labels = {e: labels for e in self.legs}
        return HoneycombPatch(self.name, dict(self.vertices), list(self.plaquettes), dict(labels))

    def plaquette(self, pid: str) -> Plaquette:
        for p in self.plaquettes:
            if p.id == pid:
                return p
        raise KeyError(pid)


# ---------------------------------------------------------------------------
# fixtures


def _hexagon_vertices(prefix: str, edge) -> dict[str, Vertex]:
    """Six vertices of one hexagon; ``edge(role)`` names the edge for a role."""
    out = {}
    for pos in POSITIONS:
        s = _SLOTS[pos]
        out[prefix + pos] = Vertex(prefix + pos, KIND_OF[pos], edge(s['a'], pos),
                                   edge(s['b'], pos), edge(s['c'], pos))
    return out


def single_hexagon(boundary: str = '1') -> HoneycombPatch:
    """One open hexagon: 6 inner edges, 6 legs, 6 vertices."""
    verts = _hexagon_vertices('', lambda role, pos: role)
    p = Plaquette('P', {pos: pos for pos in POSITIONS})
    return HoneycombPatch('hexagon', verts, [p], {e: boundary for e in OUTER})


def two_hexagons(boundary: str | Mapping[str, str] = '1') -> HoneycombPatch:
    """Two hexagons side by side sharing the vertical edge between them.

    The right corners of P1 are the left corners of P2 (``P1.UR = P2.UL``,
    ``P1.LR = P2.LL``), so the patch has 10 vertices and 11 inner edges.
    `boundary` is one label for all eight legs or a map from leg role
    (``o_T``, ``o_B``, ``o_LL``, ...) to label.
    """
    def e1(role, pos):
        if role == 'i_right':
            return 'shared'
        if role == 'o_UR':
            return 'P2.i_UL_T'
        if role == 'o_LR':
            return 'P2.i_B_LL'
        return 'P1.' + role

    def e2(role, pos):
        if role == 'i_left':
            return 'shared'
        if role == 'o_UL':
            return 'P1.i_T_UR'
        if role == 'o_LL':
            return 'P1.i_LR_B'
        return 'P2.' + role

    v1 = _hexagon_vertices('P1.', e1)
    v2 = _hexagon_vertices('P2.', e2)
    v2.pop('P2.UL')
    v2.pop('P2.LL')
    verts = {**v1, **v2}
    p1 = Plaquette('P1', {pos: 'P1.' + pos for pos in POSITIONS})
    corners = {pos: 'P2.' + pos for pos in POSITIONS}
    corners['UL'] = 'P1.UR'
    corners['LL'] = 'P1.LR'
    p2 = Plaquette('P2', corners)
    count: dict[str, int] = {}
    for v in verts.values():
        for e in v.slots:
            count[e] = count.get(e, 0) + 1
    def label(e):
        return boundary if isinstance(boundary, str) else boundary[e.split('.')[1]]
    legs = {e: label(e) for e, n in count.items() if n == 1}
    return HoneycombPatch('two-hexagons', verts, [p1, p2], legs)


def torus(L: int = 2) -> HoneycombPatch:
    """Closed L x L honeycomb on a torus: 2L^2 vertices, 3L^2 edges, L^2 plaquettes.

    Cell ``(m, n)`` holds a ``Y`` vertex below a ``lambda`` vertex joined by a
    vertical edge; ``lambda(m, n)`` reaches up-left to ``Y(m, n+1)`` and
    up-right to ``Y(m+1, n+1)``.
    """
    def vert(m, n):
        return f'v{m % L}{n % L}'

    def lam(m, n):
        return f'l{m % L}{n % L}'

    verts = {}
    for m in range(L):
        for n in range(L):
            up = f'{m}{n}'
            # lower-left neighbour lambda(m-1, n-1), lower-right lambda(m, n-1)
            verts[vert(m, n)] = Vertex(vert(m, n), 'Y', f'ur{(m - 1) % L}{(n - 1) % L}',
                                       f'ul{m % L}{(n - 1) % L}', f'z{up}')
            verts[lam(m, n)] = Vertex(lam(m, n), 'lambda', f'ul{up}', f'ur{up}', f'z{up}')
    plaqs = []
    for m in range(L):
        for n in range(L):
            plaqs.append(Plaquette(f'P{m}{n}', {
                'B': lam(m, n), 'LL': vert(m, n + 1), 'LR': vert(m + 1, n + 1),
                'UL': lam(m, n + 1), 'UR': lam(m + 1, n + 1), 'T': vert(m + 1, n + 2)}))
    return HoneycombPatch(f'torus{L}x{L}', verts, plaqs, {})


def single_vertex(a: str, b: str, c: str, kind: str = 'Y') -> HoneycombPatch:
    """One vertex whose three legs carry fixed labels."""
    v = Vertex('V', kind, 'a', 'b', 'c')
    return HoneycombPatch('vertex', {'V': v}, [], {'a': a, 'b': b, 'c': c})


# ---------------------------------------------------------------------------
# files


def patch_to_dict(patch: HoneycombPatch) -> dict:
    return {
        'name': patch.name,
        'vertices': [{'id': v.id, 'kind': v.kind, 'a': v.a, 'b': v.b, 'c': v.c}
                     for v in patch.vertices.values()],
        'plaquettes': [{'id': p.id, **{pos: p.corners[pos] for pos in POSITIONS}}
                       for p in patch.plaquettes],
        'boundary': dict(sorted(patch.boundary.items())),
    }


def patch_from_dict(doc: Mapping, source: str = '<dict>') -> HoneycombPatch:
    try:
        verts = {}
        for v in doc['vertices']:
            verts[str(v['id'])] = Vertex(str(v['id']), str(v['kind']), str(v['a']), str(v['b']),
                                         str(v['c']))
        plaqs = [Plaquette(str(p['id']), {pos: str(p[pos]) for pos in POSITIONS})
                 for p in doc.get('plaquettes') or []]
        boundary = {str(k): str(v) for k, v in (doc.get('boundary') or {}).items()}
    except (KeyError, TypeError) as exc:
        raise PatchError(f'{source}: malformed patch ({exc})') from exc
    return HoneycombPatch(str(doc.get('name', source)), verts, plaqs, boundary)


# side legs x, top and bottom legs 1: a few hundred states over E
MIXED_LEGS = {'o_T': '1', 'o_B': '1', 'o_LL': 'x', 'o_UL': 'x', 'o_LR': 'x', 'o_UR': 'x'}

FIXTURES = {
    'hexagon': single_hexagon,
    'two-hexagons': two_hexagons,
    'two-hexagons-mixed': lambda: two_hexagons(MIXED_LEGS),
    'torus': torus,
}


def load_patch(path: str | Path) -> HoneycombPatch:
    """Read a YAML patch file; the names of the built-in fixtures also work
    (``hexagon``, ``two-hexagons``, ``torus``, optionally ``hexagon:x`` to set
    every leg to ``x``)."""
    name, _, leg = str(path).partition(':')
    if name in FIXTURES and not Path(str(path)).exists():
        patch = FIXTURES[name]()
        return patch.with_boundary(leg) if leg and patch.legs else patch
    try:
        doc = yaml.safe_load(Path(path).read_text())
    except OSError as exc:
        raise PatchError(f'{path}: cannot read patch file ({exc})') from exc
    except yaml.YAMLError as exc:
        raise PatchError(f'{path}: not valid YAML ({exc})') from exc
    if not isinstance(doc, Mapping):
        raise PatchError(f'{path}: top level must be a mapping')
    return patch_from_dict(doc, str(path))


def dump_patch(patch: HoneycombPatch) -> str:
    return yaml.safe_dump(patch_to_dict(patch), sort_keys=False)
