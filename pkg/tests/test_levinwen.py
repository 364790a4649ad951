import itertools

import numpy as np
import pytest

from sixjlab.levinwen import (MIXED_LEGS, LocalHexagon, PatchError, StrandEngine, Tables,
                              build_BP, build_BsP, build_EI, build_H, certify, dump_operator,
                              dump_patch, enumerate_states, load_patch, single_hexagon,
                              single_vertex, spectrum, torus, two_hexagons)
from sixjlab.levinwen.patch import patch_from_dict, patch_to_dict
from sixjlab.sixj import HypothesisError, compute_plus, minus_from_plus

from conftest import D_X, brute_force_count, toric_code_levels


# -- patches --------------------------------------------------------------


def test_fixture_shapes():
    assert len(single_hexagon().vertices) == 6 and len(single_hexagon().legs) == 6
    two = two_hexagons()
    assert len(two.vertices) == 10 and len(two.inner_edges) == 11 and len(two.legs) == 8
    t = torus(2)
    assert len(t.vertices) == 8 and len(t.edges) == 12 and not t.legs


def test_two_hexagons_role_boundary():
    two = two_hexagons(MIXED_LEGS)
    assert two.boundary['P1.o_T'] == '1' and two.boundary['P2.o_UR'] == 'x'


def test_patch_yaml_round_trip(tmp_path):
    for patch in (single_hexagon('x'), two_hexagons(MIXED_LEGS), torus(2)):
        path = tmp_path / f'{patch.name}.yaml'
        path.write_text(dump_patch(patch))
        back = load_patch(path)
        assert patch_to_dict(back) == patch_to_dict(patch)


def test_load_patch_fixture_names():
    assert set(load_patch('hexagon:x').boundary.values()) == {'x'}
    assert len(load_patch('torus').plaquettes) == 4


def test_patch_errors():
    doc = patch_to_dict(single_hexagon())
    doc['boundary'] = {}
    with pytest.raises(PatchError):
        patch_from_dict(doc)
    doc = patch_to_dict(single_hexagon())
    doc['plaquettes'][0]['T'] = 'nowhere'
    with pytest.raises(PatchError):
        patch_from_dict(doc)
    with pytest.raises(PatchError):
        load_patch('/nonexistent/patch.yaml')


def test_unknown_boundary_label(z2):
    with pytest.raises(KeyError):
        enumerate_states(single_hexagon('x'), z2)


# -- state enumeration ------------------------------------------------------


def test_z2_hexagon_states(z2):
    patch = single_hexagon('1')
    states = enumerate_states(patch, z2)
    assert len(states) == 2 == brute_force_count(patch, z2)
    inner = [patch.edges.index(e) for e in patch.inner_edges]
    # the all-1 and the all-e inner loop
    loops = sorted({z2.lname(s.labels[i]) for i in inner} for s in states)
    assert loops == [{'1'}, {'e'}]


@pytest.mark.parametrize('patch', [single_hexagon('1'), single_hexagon('x'), single_hexagon('y'),
                                   two_hexagons(MIXED_LEGS)], ids=lambda p: p.name)
def test_e_state_counts_match_exhaustion(e_norm, patch):
    assert len(enumerate_states(patch, e_norm)) == brute_force_count(patch, e_norm)


def test_e_hexagon_unit_boundary_count(e_norm):
    # the inner loop carries one constant label: three states
    assert len(enumerate_states(single_hexagon('1'), e_norm)) == 3


def test_torus_states(z2):
    assert len(enumerate_states(torus(2), z2)) == 32 == brute_force_count(torus(2), z2)


# -- strand engine ------------------------------------------------------------


def test_strand_engine_loop_and_bubble(e_norm):
    E = StrandEngine.from_category(e_norm)
    x = e_norm.lid('x')
    assert E.diagram(()).cup(0, x).cap(0).scalar() == pytest.approx(D_X)
    # theta bubble: fuse after split gives sqrt(d_a d_b / d_c) on matching indices
    for a, b in itertools.product(range(2), repeat=2):
        m = E.diagram((x,)).split(0, a, x, x).fuse(0, b, x).matrix
        assert np.allclose(m, (a == b) * np.sqrt(D_X) * np.eye(len(m)))


def test_strand_engine_zigzag(e_norm):
    E = StrandEngine.from_category(e_norm)
    x = e_norm.lid('x')
    m = E.diagram((x,)).cup(1, x).cap(0).matrix
    assert np.allclose(m, np.eye(len(m)))


# -- operators ----------------------------------------------------------------


def test_EI_admissible_is_identity(e_norm):
    patch = single_hexagon('x')
    op = build_EI(patch, e_norm, sorted(patch.vertices)[0])
    assert np.array_equal(op.matrix, np.eye(op.dim))


def test_EI_full_space(z2):
    assert build_EI(single_vertex('e', 'e', '1'), z2, 'V', full_space=True).matrix[0, 0] == 1
    assert build_EI(single_vertex('e', '1', '1'), z2, 'V', full_space=True).matrix[0, 0] == 0


def test_full_space_limits(e_norm, z2):
    with pytest.raises(ValueError):
        build_EI(single_vertex('x', 'x', 'x'), e_norm, 'V', full_space=True)
    with pytest.raises(ValueError):
        build_EI(torus(2), z2, sorted(torus(2).vertices)[0], full_space=True)


def test_unit_loop_is_identity(e_norm):
    patch = single_hexagon('x')
    op = build_BsP(patch, e_norm, None, 'P', '1')
    assert np.allclose(op.matrix, np.eye(op.dim), atol=1e-12)


def test_z2_hexagon_operators(z2):
    patch = single_hexagon('1')
    X = np.array([[0, 1], [1, 0]])
    assert np.allclose(build_BsP(patch, z2, None, 'P', 'e').matrix, X)
    for method in ('contraction', 'moves'):
        assert np.allclose(build_BP(patch, z2, None, 'P', method).matrix, (np.eye(2) + X) / 2)
    H, _ = build_H(patch, z2)
    ev, vec = np.linalg.eigh(H.matrix)
    assert np.allclose(ev, [0, 1])
    assert np.allclose(abs(vec[:, 0]), [2 ** -0.5, 2 ** -0.5])


def test_trivial_category(trivial):
    patch = single_hexagon(trivial.lname(trivial.unit))
    assert np.allclose(build_BP(patch, trivial, None, 'P').matrix, [[1]])
    H, _ = build_H(patch, trivial)
    assert np.allclose(H.matrix, 0)


def test_e_hexagon_unit_boundary_matrix(e_norm):
    # B_P acts on the three constant loops as |d><d| / D^2
    patch = single_hexagon('1')
    op = build_BP(patch, e_norm, None, 'P')
    ring = patch.edges.index(patch.inner_edges[0])
    d = np.array([e_norm.dims[s.labels[ring]] for s in op.basis])
    D2 = float(np.sum(e_norm.dims ** 2))
    assert np.allclose(op.matrix, np.outer(d, d) / D2, atol=1e-12)


@pytest.fixture(scope='module')
def e_hexagon_x(e_norm):
    patch = single_hexagon('x')
    basis = enumerate_states(patch, e_norm)
    return patch, basis, LocalHexagon(e_norm)


def test_e_hexagon_projector(e_norm, e_hexagon_x):
    patch, basis, hexes = e_hexagon_x
    B = build_BP(patch, e_norm, None, 'P', 'contraction', basis, hexes).matrix
    M = build_BP(patch, e_norm, None, 'P', 'moves', basis, hexes).matrix
    assert np.abs(M - B).max() <= 1e-10
    assert np.abs(B @ B - B).max() <= 1e-8
    assert np.abs(B - B.conj().T).max() <= 1e-8


def test_loop_operators_obey_fusion_rules(e_norm, e_hexagon_x):
    patch, basis, hexes = e_hexagon_x
    Bs = {s: build_BsP(patch, e_norm, None, 'P', s, basis, hexes).matrix for s in '1xy'}
    I = np.eye(len(basis))
    assert np.abs(Bs['y'] @ Bs['y'] - I).max() <= 1e-10
    assert np.abs(Bs['x'] @ Bs['y'] - Bs['x']).max() <= 1e-10
    assert np.abs(Bs['x'] @ Bs['x'] - (I + 2 * Bs['x'] + Bs['y'])).max() <= 1e-10
    B = build_BP(patch, e_norm, None, 'P', 'contraction', basis, hexes).matrix
    D2 = float(np.sum(e_norm.dims ** 2))
    assert np.abs(B - (I + Bs['y'] + D_X * Bs['x']) / D2).max() <= 1e-10


def test_mutated_minus_table_breaks_hermiticity(e_norm):
    plus = compute_plus(e_norm)
    tables = Tables(plus, minus_from_plus(plus, conjugate=False))
    reps = {r.name: r for r in certify(single_hexagon('x'), e_norm, tables, cross_check=False)}
    assert not reps['hermitian[B_P]'].passed


def test_nonunitary_refused(e_raw):
    with pytest.raises(HypothesisError):
        build_BP(single_hexagon('1'), e_raw, None, 'P')


def test_certify_z2_exact(z2):
    for patch in (single_hexagon('1'), torus(2)):
        for r in certify(patch, z2, tol=1e-12):
            # the eigensolver leaves roundoff of order 1e-33 in the spectrum check
            limit = 1e-30 if r.name.startswith('spectrum') else 0
            assert r.residual <= limit, r


def test_two_hexagons_commute(e_norm):
    reps = {r.name: r for r in certify(two_hexagons(MIXED_LEGS), e_norm)}
    assert all(r.passed for r in reps.values())
    assert reps['commute'].residual <= 1e-8


def test_torus_matches_toric_code(z2):
    patch = torus(2)
    H, bps = build_H(patch, z2)
    assert np.abs(H.matrix - H.matrix.conj().T).max() <= 1e-12
    ours = np.linalg.eigvalsh(H.matrix)
    oracle = toric_code_levels(patch)
    assert np.allclose(ours, oracle, atol=1e-12)
    assert spectrum(H).ground_degeneracy == 4 == int(np.sum(np.abs(oracle) < 1e-9))


def test_full_space_hamiltonian(z2):
    H, _ = build_H(single_hexagon('1'), z2, full_space=True)
    assert H.dim == 64
    ev = np.linalg.eigvalsh(H.matrix)
    assert ev.min() >= -1e-12 and int(np.sum(np.abs(ev) < 1e-9)) == 1


def test_dump_operator(z2):
    op = build_BP(single_hexagon('1'), z2, None, 'P')
    text = dump_operator(op, z2)
    assert text.splitlines()[1] == 'dim 2'
    assert len([ln for ln in text.splitlines() if ln.startswith('state ')]) == 2
