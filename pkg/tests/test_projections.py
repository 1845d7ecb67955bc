import numpy as np
import pytest

from rauzygeom.projections import kernel_lattice, projections
from rauzygeom.substitution import (
    abelianize,
    hokkaido_family,
    incidence_matrix,
)
from rauzygeom.algebra import pisot_split


def test_dual_basis_normalization(proj0):
    # the expanding pair: u . v = 1 by construction
    assert abs(np.dot(proj0.u_num[0], proj0.v_num[0]) - 1) < 1e-12


def test_pi_e_is_beta_eigenfunctional(sigma0, proj0):
    m = incidence_matrix(sigma0)
    rng = np.random.default_rng(7)
    beta = proj0.pisot.beta_float()
    for _ in range(20):
        x = rng.integers(-5, 6, size=5)
        assert abs(proj0.pi_e(m @ x) - beta * proj0.pi_e(x)) < 1e-9


def test_pi_e_exact_matches_float(proj0):
    # the exact pairing uses the integer-cleared eigenvector, the float one
    # its unit normalization; they agree up to one fixed positive scale
    scale = float(np.linalg.norm([e.to_float() for e in proj0.v_exact]))
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.integers(-9, 10, size=5)
        exact = proj0.pairing_exact(x).to_float()
        assert abs(exact - scale * proj0.pi_e(x)) < 1e-9


def test_contraction_commutes(sigma0, proj0):
    m = incidence_matrix(sigma0)
    c = proj0.contraction_matrix()
    rng = np.random.default_rng(11)
    for _ in range(20):
        x = rng.integers(-5, 6, size=5)
        assert np.allclose(proj0.pi_c(m @ x), c @ proj0.pi_c(x), atol=1e-9)


def test_contraction_norm_certificate(proj0):
    upper = proj0.contraction_norm_upper()
    c = proj0.contraction_matrix()
    spectral = np.linalg.norm(c, 2)
    assert spectral <= upper < 1


def test_kernel_lattice(proj0):
    lattice = kernel_lattice(proj0)
    assert lattice.rank == 3  # rank of the pairing, so L has rank n - 3 = 2
    basis = lattice.kernel_basis
    assert basis.shape == (5, 2)
    m = incidence_matrix(proj0.sub)
    for col in basis.T:
        # lattice vectors vanish under both projections
        assert abs(proj0.pi_e(col)) < 1e-9
        assert np.allclose(proj0.pi_c(col), 0, atol=1e-9)
        # and the lattice is invariant under the incidence matrix
        assert not np.any(lattice.coords(m @ col))


def test_kernel_membership_decision(proj0):
    lattice = kernel_lattice(proj0)
    e = np.eye(5, dtype=np.int64)
    inside = e[2] + e[3] - e[0]  # e3 + e4 - e1
    another = e[1] + e[2] - e[4]  # e2 + e3 - e5
    outside = e[0]
    assert not np.any(lattice.coords(inside))
    assert not np.any(lattice.coords(another))
    assert np.any(lattice.coords(outside))


def test_redundancy_witness(proj0):
    c = proj0.redundancy_witness()
    total = np.zeros(2)
    pe = 0.0
    for i, ci in enumerate(c):
        e = np.zeros(5)
        e[i] = 1
        total += ci * proj0.pi_c(e)
        pe += ci * proj0.pi_e(e)
    assert np.all(np.abs(total) < 1e-10)
    assert abs(pe) < 1e-10
    assert any(ci != 0 for ci in c)


def test_family_members_share_structure(sigma1, proj1):
    assert proj1.dim_c == 2
    assert proj1.pisot.d == 3
    assert kernel_lattice(proj1).kernel_basis.shape == (5, 2)
