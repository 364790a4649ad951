import itertools

import numpy as np
import pytest

from sixjlab import GaugeTransform, apply_gauge, bundled
from sixjlab.catcore import category_from_dict

SQ3 = np.sqrt(3.0)

# acceptance outcomes, printed once at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section('acceptance criteria')
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
D_X = 1 + SQ3


def brute_force_count(patch, cat):
    """Admissible labelings weighted by vertex multiplicities, by exhaustion."""
    free = [e for e in patch.edges if e not in patch.boundary]
    fixed = {e: cat.lid(n) for e, n in patch.boundary.items()}
    total = 0
    for labs in itertools.product(range(cat.rank), repeat=len(free)):
        lab = {**fixed, **dict(zip(free, labs))}
        w = 1
        for v in patch.vertices.values():
            w *= int(cat.N[lab[v.a], lab[v.b], lab[v.c]])
            if not w:
                break
        total += w
    return total


def toric_code_levels(patch):
    """Spectrum of sum_P (1 - (1 + X_P)/2) on the closed-string sector of Z2 edge labels."""
    edges = patch.edges
    pos = {e: i for i, e in enumerate(edges)}
    n = len(edges)
    even = [s for s in range(2 ** n)
            if all(sum((s >> pos[e]) & 1 for e in (v.a, v.b, v.c)) % 2 == 0
                   for v in patch.vertices.values())]
    index = {s: k for k, s in enumerate(even)}
    H = np.zeros((len(even), len(even)))
    for p in patch.plaquettes:
        roles = patch.roles(p)
        mask = sum(1 << pos[roles[r]] for r in ('i_B_LL', 'i_left', 'i_UL_T', 'i_T_UR',
                                                'i_right', 'i_LR_B'))
        for s in even:
            H[index[s], index[s]] += 0.5
            H[index[s ^ mask], index[s]] -= 0.5
    return np.linalg.eigvalsh(H)


def z2z2_dict():
    """The group category of Z2 x Z2 with trivial associator: all F = 1."""
    names = ['1', 'a', 'b', 'c']
    fusion = [[names[i], names[j], names[i ^ j], 1] for i in range(1, 4) for j in range(1, 4)]
    fmats = [{'key': [names[i], names[j], names[k], names[i ^ j ^ k]], 'matrix': 1}
             for i, j, k in itertools.product(range(4), repeat=3)]
    return {'name': 'Z2xZ2', 'labels': names, 'unit': '1', 'fusion': fusion,
            'dims': {n: 1 for n in names}, 'fmatrices': fmats}


@pytest.fixture(scope='session')
def e_raw():
    return bundled('E_raw')


@pytest.fixture(scope='session')
def e_norm():
    return bundled('E_normalized')


@pytest.fixture(scope='session')
def z2():
    return bundled('Z2')


@pytest.fixture(scope='session')
def trivial():
    return bundled('trivial')


@pytest.fixture(scope='session')
def z2z2():
    return category_from_dict(z2z2_dict())


@pytest.fixture(scope='session')
def z2z2_scrambled(z2z2):
    """Z2 x Z2 after a random scalar gauge: symmetrizable, but not in its symmetric gauge."""
    g = GaugeTransform.random(z2z2, np.random.default_rng(3))
    return apply_gauge(z2z2, g)
