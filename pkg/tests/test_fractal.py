import numpy as np
import pytest

from rauzygeom.chains import Chain
from rauzygeom.fractal import (
    area_conservation_check,
    boundary_convergence_report,
    decomposition_check,
    hausdorff_distance,
    measure_eigen_check,
    periodic_audit,
    rauzy_approx,
    self_replicating_audit,
    set_equation_check,
    tiling_audit,
    two_oracle_check,
)

from goldens import FIVE_PATCH

ZERO = (0,) * 5


def test_level_zero_is_the_parallelogram(sigma0, proj0):
    tile = rauzy_approx(sigma0, proj0, (1, 2), 0)
    assert len(tile.polygons) == 1
    assert tile.polygons[0].shape == (4, 2)
    e = np.eye(5)
    u, v = proj0.pi_c(e[0]), proj0.pi_c(e[1])
    assert abs(tile.area() - abs(u[0] * v[1] - u[1] * v[0])) < 1e-12


def test_level_cap(sigma0, proj0):
    with pytest.raises(ValueError):
        rauzy_approx(sigma0, proj0, (1, 2), 15)


def test_piece_count_grows_like_beta(sigma0, proj0):
    beta = proj0.pisot.beta_float()
    counts = [len(rauzy_approx(sigma0, proj0, (2, 3), k).polygons) for k in (8, 12)]
    ratio = (counts[1] / counts[0]) ** (1 / 4)
    assert abs(ratio - beta) < 0.15


def test_set_equation(sigma0, proj0):
    for wtype in ((1, 2), (2, 3), (4, 5)):
        report = set_equation_check(sigma0, proj0, wtype, 6)
        assert report["passed"], (wtype, report)


def test_area_conservation(sigma0, proj0):
    report = area_conservation_check(sigma0, proj0, (2, 4), 8)
    assert report["passed"]


def test_measure_eigenvector(sigma0, sigma1, proj0, proj1):
    for sub, proj in ((sigma0, proj0), (sigma1, proj1)):
        report = measure_eigen_check(sub, proj)
        assert report["passed"]
        assert report["relative_error"] < 1e-9


def test_boundary_convergence(sigma0, proj0):
    gaps = boundary_convergence_report(sigma0, proj0, (1, 2), 6)
    # successive approximations get closer at the contraction rate
    assert gaps[-1] < gaps[0]
    assert gaps[-1] < 0.2


def test_hausdorff_distance_basics():
    a = np.array([[0.0, 0.0], [1.0, 0.0]])
    b = np.array([[0.0, 0.5]])
    assert abs(hausdorff_distance(a, b) - np.hypot(1.0, 0.5)) < 1e-12
    assert hausdorff_distance(a, a) == 0.0


def test_sample_points_edge_subdivision(sigma0, proj0):
    tile = rauzy_approx(sigma0, proj0, (2, 4), 6)
    coarse = tile.sample_points()
    fine = tile.sample_points(spacing=0.05)
    assert len(fine) > len(coarse)
    # the vertex sample is a subset of the subdivided edge sample
    from scipy.spatial import cKDTree

    assert cKDTree(fine).query(coarse)[0].max() < 1e-9
    # and consecutive subdivided points are no farther apart than the spacing
    assert cKDTree(fine).query(fine, k=2)[0][:, 1].max() <= 0.05 + 1e-9


def test_tiling_audit_detects_holes(sigma0, proj0):
    tile = rauzy_approx(sigma0, proj0, (1, 2), 0)
    region = tile.union()
    good = tiling_audit([(tile, np.zeros(2))], region)
    assert good["passed"] and good["overlap"] == 0.0 and good["hole"] == 0.0
    shifted = tiling_audit([(tile, np.array([5.0, 5.0]))], region)
    assert not shifted["passed"] and shifted["hole"] > 0.9


def test_self_replicating_audit_small(sigma0, proj0):
    seed = Chain.from_faces(5, 2, [(1, ZERO, t) for t in FIVE_PATCH])
    report = self_replicating_audit(sigma0, proj0, seed, 5, 2, 8)
    assert report["passed"]
    assert report["overlap"] == 0.0 and report["hole"] == 0.0


def test_periodic_audit_small(sigma0, proj0):
    faces = Chain.from_faces(
        5, 2, [(1, ZERO, (2, 3)), (1, ZERO, (2, 4)), (1, ZERO, (3, 4))]
    )
    e = np.eye(5, dtype=np.int64)
    basis = np.array([e[3] - e[1], e[3] - e[2]]).T
    report = periodic_audit(sigma0, proj0, faces, basis, 8, extent=3)
    assert report["passed"]
    assert report["overlap"] == 0.0 and report["hole"] == 0.0


def test_two_oracle_levels_smoke(sigma0, proj0):
    report = two_oracle_check(sigma0, proj0, levels=(4, 6, 8), tol=0.12)
    assert report["passed"], {
        t: r for t, r in report["types"].items() if not r["passed"]
    }


def test_decomposition_identities_smoke(sigma0, proj0):
    report = decomposition_check(sigma0, proj0, level=8, letter_depth=16)
    assert set(report) == {(2, 3), (2, 4), (3, 4), (2, 5), (3, 5)}
    for wtype, dist in report.items():
        assert dist < 0.1, (wtype, dist)
