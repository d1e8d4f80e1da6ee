"""Acceptance gate: every headline claim of the package, one test per
claim, at the stated tolerance.

The ensemble claims (criterion 5) use n = 100 states per family with
seed 1; that fixture performs ~800 witness optimizations and dominates
the runtime of this module (a few minutes on one core).
"""
import time

import numpy as np
import pytest

from gmn3q.channel import asymptotic_map, choi_matrix, evolve
from gmn3q.dynamics import TimeGrid, sweep
from gmn3q.gmn import (
    BIPARTITIONS,
    bipartite_negativity,
    genuine_negativity,
    verify_certificate,
)
from gmn3q.states import (
    ghz1,
    ghz2,
    pure_to_density,
    random_pure,
    random_weighted_graph,
    validate_density,
    w_state,
)

ENSEMBLE_SEED = 1
ENSEMBLE_SIZE = 100

RATE_GRID = TimeGrid(np.linspace(0.1, 2.0, 41))
FULL_GRID = TimeGrid.default()
# three-point stencil centered on gt = 5: the middle eta value is the
# second-order central difference of ln E
LATE_GRID = TimeGrid(np.array([4.75, 5.0, 5.25]))


def ginibre_density(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    rho = a @ a.conj().T
    return validate_density(rho / rho.trace())


@pytest.fixture(scope="module")
def late_time_ensembles():
    """Per-family asymptotic values and decay rates at gt = 5."""
    families = {
        "random": random_pure(ENSEMBLE_SEED, ENSEMBLE_SIZE),
        "graph": random_weighted_graph(ENSEMBLE_SEED, ENSEMBLE_SIZE),
    }
    out = {}
    for kind, members in families.items():
        einf, eta5 = [], []
        for psi in members:
            rho = pure_to_density(psi)
            einf.append(genuine_negativity(asymptotic_map(rho)).value)
            eta5.append(sweep(rho, LATE_GRID).eta_values[1])
        out[kind] = {"einf": np.array(einf), "eta5": np.array(eta5)}
    return out


@pytest.fixture(scope="module")
def sandwich_pool():
    """200 random pure states with their certified results."""
    pool = []
    for psi in random_pure(2025, 200):
        rho = pure_to_density(psi)
        pool.append((rho, genuine_negativity(rho)))
    return pool


@pytest.fixture(scope="module")
def ghz_sweeps():
    return {
        "ghz1": sweep(pure_to_density(ghz1()), RATE_GRID),
        "ghz2": sweep(pure_to_density(ghz2()), RATE_GRID),
    }


def test_criterion_1_anchor_values_within_time_budget():
    t0 = time.perf_counter()
    res_ghz = genuine_negativity(pure_to_density(ghz1()))
    t1 = time.perf_counter()
    res_w = genuine_negativity(pure_to_density(w_state()))
    t2 = time.perf_counter()
    assert abs(res_ghz.value - 0.500) <= 1e-3
    assert abs(res_w.value - 0.443) <= 5e-3
    assert t1 - t0 < 5.0
    assert t2 - t1 < 5.0


def test_criterion_2_fast_ghz_rate_is_constant_4p5(ghz_sweeps):
    eta = ghz_sweeps["ghz1"].eta_values
    assert np.all(~np.isnan(eta))
    assert np.max(np.abs(eta + 4.5)) <= 0.01


def test_criterion_2_slow_ghz_rate_is_constant_0p5(ghz_sweeps):
    eta = ghz_sweeps["ghz2"].eta_values
    assert np.all(~np.isnan(eta))
    assert np.max(np.abs(eta + 0.5)) <= 0.01


def test_criterion_2_fast_ghz_matches_analytic_decay(ghz_sweeps):
    expected = 0.5 * np.exp(-4.5 * RATE_GRID.gt_values)
    assert np.max(np.abs(ghz_sweeps["ghz1"].e_values - expected)) <= 1e-4


def test_criterion_3_dephasing_free_state_is_flat():
    series = sweep(pure_to_density(w_state()), FULL_GRID)
    spread = float(np.max(series.e_values) - np.min(series.e_values))
    assert spread <= 1e-5


def test_criterion_4_asymptotic_survivor_set_is_exact():
    survivors_one_based = {
        (1, 1), (2, 2), (2, 3), (2, 5), (3, 2), (3, 3), (3, 5),
        (4, 4), (4, 6), (4, 7), (5, 2), (5, 3), (5, 5),
        (6, 4), (6, 6), (6, 7), (7, 4), (7, 6), (7, 7), (8, 8),
    }
    rho = ginibre_density(140)
    assert np.all(np.abs(rho.mat) > 0)  # dense: every entry is exercised
    out = asymptotic_map(rho).mat
    nonzero = {(i + 1, j + 1) for i in range(8) for j in range(8) if out[i, j] != 0}
    assert nonzero == survivors_one_based


def test_criterion_5a_asymptotic_entanglement_is_strictly_positive(late_time_ensembles):
    for kind in ("random", "graph"):
        einf = late_time_ensembles[kind]["einf"]
        assert einf.min() > 1e-6, f"{kind}: min E_inf = {einf.min():.3e}"


def test_criterion_5b_graph_family_keeps_less_asymptotic_entanglement(late_time_ensembles):
    mean_random = late_time_ensembles["random"]["einf"].mean()
    mean_graph = late_time_ensembles["graph"]["einf"].mean()
    assert mean_graph < mean_random, (
        f"graph mean {mean_graph:.4f} vs random mean {mean_random:.4f}")


def test_criterion_5c_late_time_rate_sits_in_the_half_band(late_time_ensembles):
    means = {}
    for kind in ("random", "graph"):
        eta5 = late_time_ensembles[kind]["eta5"]
        defined = eta5[~np.isnan(eta5)]
        assert defined.size == ENSEMBLE_SIZE
        means[kind] = float(defined.mean())
    outside = {k: f"{m:.4f}" for k, m in means.items() if not -0.6 <= m <= -0.4}
    assert not outside, (
        f"mean eta(gt=5) outside [-0.6, -0.4]: {outside}; with E settling "
        f"to a positive asymptote the rate tends to 0, not -0.5")


def test_criterion_6_choi_matrices_are_positive():
    for gt in (0.0, 0.1, 1.0, 10.0, 50.0):
        assert float(np.linalg.eigvalsh(choi_matrix(gt))[0]) >= -1e-10


def test_criterion_6_semigroup_composition_on_100_states():
    rng = np.random.default_rng(6)
    worst = 0.0
    for k in range(100):
        rho = ginibre_density(1000 + k)
        gt1, gt2 = rng.uniform(0.0, 5.0, size=2)
        two = evolve(evolve(rho, gt1), gt2).mat
        one = evolve(rho, gt1 + gt2).mat
        worst = max(worst, float(np.max(np.abs(two - one))))
    assert worst <= 1e-12


def test_criterion_6_value_never_increases_under_dephasing():
    grid = [0.0, 0.3, 0.7, 1.2, 2.0]
    for psi in (ghz1(), w_state(), random_pure(64, 1)[0]):
        rho = pure_to_density(psi)
        values = [genuine_negativity(evolve(rho, gt)).value for gt in grid]
        for earlier, later in zip(values, values[1:]):
            assert later <= earlier + 1e-6


def test_criterion_6_sandwich_bound_on_200_states(sandwich_pool):
    for rho, res in sandwich_pool:
        floor = min(bipartite_negativity(rho, p) for p in BIPARTITIONS)
        assert res.value <= floor + 1e-6


def test_criterion_6_local_unitary_invariance_over_50_trials():
    def haar_u2(rng):
        z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        q, r = np.linalg.qr(z)
        return q * (np.diag(r) / np.abs(np.diag(r)))

    rng = np.random.default_rng(50)
    for psi in random_pure(3000, 50):
        rho = pure_to_density(psi)
        u = np.kron(np.kron(haar_u2(rng), haar_u2(rng)), haar_u2(rng))
        rotated = validate_density(u @ rho.mat @ u.conj().T)
        va = genuine_negativity(rho).value
        vb = genuine_negativity(rotated).value
        assert abs(va - vb) <= 1e-5


def test_criterion_6_convexity_over_50_mixtures():
    rng = np.random.default_rng(77)
    members = random_pure(4000, 100)
    for k in range(50):
        ra = pure_to_density(members[2 * k])
        rb = pure_to_density(members[2 * k + 1])
        p = float(rng.uniform(0.1, 0.9))
        mix = validate_density(p * ra.mat + (1 - p) * rb.mat)
        ea = genuine_negativity(ra).value
        eb = genuine_negativity(rb).value
        em = genuine_negativity(mix).value
        assert em <= p * ea + (1 - p) * eb + 1e-6


def test_criterion_6_certificates_verify_on_every_reported_result(sandwich_pool):
    batch = list(sandwich_pool)
    for rho in (pure_to_density(ghz1()), pure_to_density(w_state()),
                validate_density(np.eye(8) / 8),
                evolve(pure_to_density(ghz1()), 0.5),
                asymptotic_map(ginibre_density(8))):
        batch.append((rho, genuine_negativity(rho)))
    for rho, res in batch:
        assert res.duality_gap <= 1e-8
        assert max(res.residuals["decomposition"], res.residuals["cone_floor"],
                   res.residuals["cone_ceiling"]) <= 1e-8
        report = verify_certificate(res, rho)
        assert report.passed, report.checks
