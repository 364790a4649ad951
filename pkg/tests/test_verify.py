import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sixjlab import GaugeTransform, apply_gauge, bundled
from sixjlab.verify import (PENTAGON_TOL, UNITARITY_TOL, check_det_modulus, check_dim_consistency,
                            check_inverse_data, check_pentagon, check_unitarity)


def _z2_with(phase, z2):
    # a Z2 associator is a 3-cocycle exactly when F^e_{eee} squares to 1
    return z2.with_F({**z2.F, z2.key('e', 'e', 'e', 'e'): [[phase]]})


def test_pentagon_z2_exact(z2):
    rep = check_pentagon(z2)
    assert rep.passed and rep.residual == 0


@pytest.mark.parametrize('phase,ok', [(1, True), (-1, True), (1j, False), (np.exp(0.3j), False)])
def test_pentagon_z2_cocycle_oracle(z2, phase, ok):
    assert check_pentagon(_z2_with(phase, z2)).passed is ok


def test_pentagon_e_raw(e_raw, e_norm):
    assert check_pentagon(e_raw).residual <= 1e-9
    assert check_pentagon(e_norm).residual <= 1e-9


def test_pentagon_sign_flip_fails(e_raw):
    bad = e_raw.perturbed(e_raw.key('x', 'y', 'x', 'x'), (0, 0), -2)
    rep = check_pentagon(bad)
    assert not rep.passed and rep.worst


def test_unitarity(e_raw, e_norm, z2):
    assert check_unitarity(e_norm).residual <= 1e-10
    rep = check_unitarity(z2)
    assert rep.passed and rep.residual == 0
    assert not check_unitarity(e_raw).passed


def test_e_raw_first_column_norm(e_raw):
    # first diagonal entry of F^dagger F is the squared norm of column one
    col = e_raw.fmat('x', 'x', 'x', 'x')[:, 0]
    assert abs(np.sum(np.abs(col) ** 2) - 1) > 0.1


def test_det_modulus(e_norm, e_raw):
    # necessary but not sufficient: the raw data is not unitary yet has |det F| = 1
    assert check_det_modulus(e_norm).passed
    assert check_det_modulus(e_raw).passed
    q = e_norm.key('x', 'y', 'x', 'x')
    assert not check_det_modulus(e_norm.with_F({**e_norm.F, q: 1.1 * e_norm.F[q]})).passed


def test_inverse_data(e_raw):
    key = e_raw.key('x', 'x', 'x', 'x')
    assert key in e_raw.inverses
    assert check_inverse_data(e_raw, e_raw.inverses[key], key).residual <= 1e-9
    assert not check_inverse_data(e_raw, e_raw.F[key].T, key).passed


def test_inverse_identity(z2):
    key = z2.key('e', 'e', 'e', 'e')
    rep = check_inverse_data(z2, [[1]], key)
    assert rep.passed and rep.residual == 0


def test_inverse_shape_checked(e_raw):
    with pytest.raises(ValueError):
        check_inverse_data(e_raw, np.eye(5), ('x', 'x', 'x', 'x'))


def test_dim_consistency(e_raw, z2):
    assert check_dim_consistency(e_raw).passed
    rep = check_dim_consistency(z2)
    assert rep.passed and rep.residual == 0
    flat = e_raw.with_dims([1, 1, 1])
    rep = check_dim_consistency(flat)
    assert not rep.passed
    assert rep.residual == pytest.approx(3.0)


def test_report_record_format(z2):
    rec = check_pentagon(z2).record(timing=False)
    assert rec.startswith('check=pentagon pass=1 residual=0.000e+00')
    assert 'millis' not in rec
    assert 'millis=' in check_pentagon(z2).record()


def test_default_tolerances():
    assert PENTAGON_TOL == 1e-9 and UNITARITY_TOL == 1e-10


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_pentagon_is_gauge_invariant(seed):
    cat = bundled('E_raw')
    gauged = apply_gauge(cat, GaugeTransform.random(cat, np.random.default_rng(seed)))
    assert check_pentagon(gauged).residual <= 1e-9


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_unitary_gauge_keeps_unitarity(seed):
    cat = bundled('E_normalized')
    rng = np.random.default_rng(seed)
    g = GaugeTransform.identity(cat)
    for key in np.ndindex(cat.N.shape):
        n = int(cat.N[key])
        if n and cat.unit not in key[:2]:
            q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
            g[key] = q
    assert check_unitarity(apply_gauge(cat, g)).residual <= 1e-10


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_small_perturbation_is_detected(data):
    cat = bundled('E_normalized')
    key = data.draw(st.sampled_from(sorted(cat.F)))
    shape = cat.F[key].shape
    i = data.draw(st.integers(0, shape[0] - 1))
    j = data.draw(st.integers(0, shape[1] - 1))
    phase = data.draw(st.floats(0, 2 * np.pi))
    bad = cat.perturbed(key, (i, j), 1e-3 * np.exp(1j * phase))
    assert not (check_pentagon(bad).passed and check_unitarity(bad).passed)
