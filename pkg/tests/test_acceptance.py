"""Acceptance suite: one criterion per test, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; every criterion states its tolerance inline.
"""

import numpy as np
import pytest

from goldens import (
    FIVE_PATCH,
    SCC_DEPTHS,
    TRIBO_M1_GEOM,
    TRIBO_M1_STAR,
    TRIBO_M2_GEOM,
    TRIBO_M2_STAR,
    family_m_geom,
)
from rauzygeom.chains import Chain, boundary, pairing, poincare_phi, poincare_phi_inv, random_chain
from rauzygeom.dualmaps import E_geom, E_k, E_k_star, commutation_check, exterior_matrices
from rauzygeom.dynamics import (
    coding_cross_check,
    first_return_check,
    modified_partition,
    strong_coincidence,
)
from rauzygeom.fractal import (
    decomposition_check,
    measure_eigen_check,
    periodic_audit,
    self_replicating_audit,
    two_oracle_check,
)
from rauzygeom.geometry import check_nice, seed_contained, surround_check, three_touching_elements
from rauzygeom.projections import kernel_lattice, projections
from rauzygeom.algebra import pisot_split
from rauzygeom.substitution import (
    hokkaido_family,
    incidence_matrix,
    nonprojecting_family,
    tribonacci,
)

ZERO = (0,) * 5


def verdict(num: int, ok: bool, desc: str) -> bool:
    print(f"CRITERION {num:2d}: {'PASS' if ok else 'FAIL'} — {desc}")
    return ok


def test_criterion_01_matrix_goldens(tribo):
    _, m1s, m2g, _ = exterior_matrices(tribo, 1)
    _, m2s, m1g, _ = exterior_matrices(tribo, 2)
    ok = (
        np.array_equal(m1s, TRIBO_M1_STAR)
        and np.array_equal(m2g, TRIBO_M2_GEOM)
        and np.array_equal(m2s, TRIBO_M2_STAR)
        and np.array_equal(m1g, TRIBO_M1_GEOM)
    )
    for t in range(4):
        _, _, geom, _ = exterior_matrices(hokkaido_family(t), 3)
        ok = ok and np.array_equal(geom, family_m_geom(t))
    assert verdict(
        1, ok, "exterior matrices match the hand-checked goldens exactly"
    )


def test_criterion_02_dual_image_goldens(sigma0):
    m2e2 = (1, 0, 0, 0, -1)
    expected = {
        (4, 5): [(1, ZERO, (3, 4))],
        (3, 5): [(1, ZERO, (2, 4))],
        (3, 4): [(1, ZERO, (2, 3))],
        (2, 5): [(1, m2e2, (4, 5)), (1, ZERO, (1, 4))],
        (2, 4): [(1, m2e2, (3, 5)), (1, ZERO, (1, 3))],
        (2, 3): [(1, m2e2, (2, 5)), (1, ZERO, (1, 2))],
        (1, 5): [(-1, ZERO, (4, 5))],
        (1, 4): [(-1, ZERO, (3, 5))],
        (1, 3): [(-1, ZERO, (2, 5))],
        (1, 2): [(-1, ZERO, (1, 5))],
    }
    ok = all(
        E_geom(sigma0, Chain.from_faces(5, 2, [(1, ZERO, w)]))
        == Chain.from_faces(5, 2, faces)
        for w, faces in expected.items()
    )
    assert verdict(
        2, ok, "all ten basis images of the geometric dual, term for term"
    )


def test_criterion_03_duality_exhaustive(sigma0, sigma1):
    violations = 0
    for sub in (sigma0, sigma1):
        from rauzygeom.chains import wedge_types

        types = wedge_types(5, 3)
        for atype in types:
            x = Chain.from_faces(5, 3, [(1, ZERO, atype)], dual=True)
            ex = E_k_star(sub, x)
            bases = {b for (b, _), _ in ex.terms.items()} | {ZERO}
            for btype in types:
                for base in bases:
                    y = Chain.from_faces(5, 3, [(1, base, btype)])
                    if pairing(ex, y) != pairing(x, E_k(sub, y)):
                        violations += 1
    assert verdict(
        3,
        violations == 0,
        "adjunction of the extension and its dual over all degree-3 basis "
        f"pairs for both family members ({violations} violations)",
    )


def test_criterion_04_operator_identities(sigma0, sigma1, tribo):
    rng = np.random.default_rng(0)
    ok = True
    for sub in (sigma0, sigma1, tribo):
        n = sub.n
        for _ in range(500):
            k = int(rng.integers(2, n))
            c = random_chain(n, k, rng, terms=3)
            if not boundary(boundary(c)).is_zero():
                ok = False
            x = random_chain(n, int(rng.integers(1, n)), rng, dual=True, terms=3)
            if poincare_phi_inv(poincare_phi(x)) != x:
                ok = False
            g = random_chain(n, 2, rng, terms=3)
            if not commutation_check(sub, g):
                ok = False
    assert verdict(
        4,
        ok,
        "squared boundary, duality round-trip, and the boundary/dual "
        "commutation on 500 random chains per substitution, exactly",
    )


def test_criterion_05_classification(sigma0, pd0):
    report = check_nice(sigma0, pd0)
    ok = (
        pd0.f == (-1, -1, 0, 1)
        and pd0.g == (1, -1, 1)
        and pd0.is_unit
        and pd0.is_reducible
        and report["nice"]
    )
    bad = nonprojecting_family(2)
    bad_report = check_nice(bad)
    ok = ok and not bad_report["S1"]["passed"] and bad_report["S1"]["witnesses"]
    assert verdict(
        5,
        bool(ok),
        "first family member satisfies all four hypotheses; the "
        "non-projecting family at t=2 fails S1 with an overlap witness",
    )


def test_criterion_06_strong_coincidence(scc0, sigma1, sigma2, proj1, proj2):
    ok = scc0.passed and scc0.pairs == SCC_DEPTHS
    for sub, proj in ((sigma1, proj1), (sigma2, proj2)):
        table = strong_coincidence(sub, proj, depth_cap=20)
        ok = ok and table.passed
        ok = ok and all(
            table.pairs.get(pair) is not None and table.pairs[pair] <= depth
            for pair, depth in SCC_DEPTHS.items()
        )
    assert verdict(
        6,
        bool(ok),
        "the 30 golden coincidence depths for t=0, and depths no larger "
        "for t=1, 2 (cap 20)",
    )


def test_criterion_07_containment_and_annulus():
    from rauzygeom.chains import wedge_types

    ok = True
    for t in range(3):
        sub = hokkaido_family(t)
        for wtype in wedge_types(5, 2):
            seed = Chain.from_faces(5, 2, [(1, ZERO, wtype)])
            ok = ok and seed_contained(sub, seed, 5)
    sub = hokkaido_family(0)
    proj = projections(sub, pisot_split(sub))
    elements = three_touching_elements(sub, proj)
    ok = ok and len(elements) == 5
    for el in elements:
        report = surround_check(sub, proj, el.faces, exponent=15)
        ok = ok and report["surrounds"] and report["gap"] > 0
    assert verdict(
        7,
        bool(ok),
        "every single face re-occurs in its own 5-fold image (t=0,1,2) and "
        "each 3-touching seed is surrounded by its 15-fold image",
    )


def test_criterion_08_measure_eigenvector(sigma0, sigma1, sigma2, tribo, proj0, proj1, proj2):
    tribo_proj = projections(tribo, pisot_split(tribo))
    ok = True
    worst = 0.0
    for sub, proj in (
        (sigma0, proj0),
        (sigma1, proj1),
        (sigma2, proj2),
        (tribo, tribo_proj),
    ):
        report = measure_eigen_check(sub, proj, tol=1e-9)
        ok = ok and report["passed"]
        worst = max(worst, report["relative_error"])
    assert verdict(
        8,
        bool(ok),
        f"projected-face areas form a beta-eigenvector, relative error "
        f"{worst:.2e} <= 1e-9, four substitutions",
    )


def test_criterion_09_tiling_audits(sigma0, proj0):
    seed = Chain.from_faces(5, 2, [(1, ZERO, t) for t in FIVE_PATCH])
    a = self_replicating_audit(sigma0, proj0, seed, 5, 3, 10, tol=1e-6)
    faces = Chain.from_faces(
        5, 2, [(1, ZERO, (2, 3)), (1, ZERO, (2, 4)), (1, ZERO, (3, 4))]
    )
    e = np.eye(5, dtype=np.int64)
    basis = np.array([e[3] - e[1], e[3] - e[2]]).T
    p = periodic_audit(sigma0, proj0, faces, basis, 10, extent=5, tol=1e-6)
    ok = a["passed"] and p["passed"]
    assert verdict(
        9,
        bool(ok),
        "self-replicating and lattice-periodic level-10 tilings: overlap "
        f"{max(a['overlap'], p['overlap']):.1e} and hole "
        f"{max(a['hole'], p['hole']):.1e} fractions <= 1e-6",
    )


def test_criterion_10_two_oracle_agreement(sigma0, proj0):
    report = two_oracle_check(sigma0, proj0, levels=(6, 8, 10), tol=0.05)
    worst = max(r["agreement"] for r in report["types"].values())
    assert verdict(
        10,
        report["passed"],
        "numeration clouds vs renormalized patches for all 10 types: "
        f"agreement {worst:.1e} <= 0.05 at level 10, distances decreasing",
    )


def test_criterion_11_letter_decompositions(sigma0, proj0):
    fine = decomposition_check(sigma0, proj0, level=10, letter_depth=20)
    coarse = decomposition_check(sigma0, proj0, level=8, letter_depth=20)
    worst = max(fine.values())
    ok = worst < 0.05 and all(fine[w] < coarse[w] for w in fine)
    assert verdict(
        11,
        bool(ok),
        "all five subtile decompositions into reflected letter tiles: "
        f"Hausdorff distance {worst:.3f} < 0.05 at level 10, decreasing",
    )


def test_criterion_12_first_return_and_coding(sigma0, sigma1, proj0, proj1):
    ok = True
    fractions = []
    for sub, proj in ((sigma0, proj0), (sigma1, proj1)):
        report = first_return_check(
            sub, proj, samples=10_000, cloud_size=800_000, seed=0
        )
        fractions.append(report["fraction_verified"])
        ok = ok and not report["failures"] and report["fraction_verified"] >= 0.99
    for sub, proj, level in ((sigma0, proj0, 14), (sigma1, proj1, 12)):
        partition = modified_partition(sub, proj, level=level)
        coding = coding_cross_check(sub, proj, partition, symbols=10_000)
        ok = ok and not coding["mismatches"]
    assert verdict(
        12,
        bool(ok),
        "first-return times and vertices on 10^4 samples "
        f"({min(fractions):.2%} verified >= 99%), and the 10^4-symbol orbit "
        "coding matches the morphism image with zero mismatches",
    )


def test_criterion_13_exact_identities(sigma0, proj0):
    m = incidence_matrix(sigma0)
    e2 = np.zeros(5, dtype=np.int64)
    e2[1] = 1
    vec = m @ m @ m @ e2 - m @ e2 - e2
    exact_zero = proj0.pairing_exact(vec).is_zero()
    c = proj0.redundancy_witness()
    eye = np.eye(5)
    pc = sum(ci * proj0.pi_c(eye[i]) for i, ci in enumerate(c))
    pe = sum(ci * proj0.pi_e(eye[i]) for i, ci in enumerate(c))
    residual = float(np.hypot(np.linalg.norm(pc), abs(pe)))
    ok = exact_zero and residual < 1e-10 and any(ci != 0 for ci in c)
    assert verdict(
        13,
        bool(ok),
        "the cubic relation of the second basis vector vanishes exactly in "
        f"Z[beta]; the integer redundancy relation projects to {residual:.1e}"
        " < 1e-10",
    )
