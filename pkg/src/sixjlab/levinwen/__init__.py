"""Levin-Wen string-net models on small honeycomb patches."""
from .operators import (FULL_SPACE_EDGE_LIMIT, LocalHexagon, PlaquetteOperator, State, Tables,
                        build_BP, build_BsP, build_EI, build_H, certify, dump_operator,
                        enumerate_states, spectrum, tables_for)
from .patch import (FIXTURES, MIXED_LEGS, HoneycombPatch, PatchError, Plaquette, Vertex,
                    dump_patch, load_patch, single_hexagon, single_vertex, torus, two_hexagons)
from .strands import Diagram, StrandEngine

__all__ = ['FULL_SPACE_EDGE_LIMIT', 'LocalHexagon', 'PlaquetteOperator', 'State', 'Tables',
           'build_BP', 'build_BsP', 'build_EI', 'build_H', 'certify', 'dump_operator',
           'enumerate_states', 'spectrum', 'tables_for', 'FIXTURES', 'MIXED_LEGS',
           'HoneycombPatch', 'PatchError', 'Plaquette', 'Vertex', 'dump_patch', 'load_patch',
           'single_hexagon', 'single_vertex', 'torus', 'two_hexagons', 'Diagram', 'StrandEngine']
