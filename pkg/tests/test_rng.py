"""Deterministic PRNG contracts: reproducibility, substream
independence, output ranges, and Gaussian moments."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from gmn3q.rng import Xoshiro256pp


def test_same_seed_and_stream_reproduce():
    a = Xoshiro256pp(12345, stream=7)
    b = Xoshiro256pp(12345, stream=7)
    assert [a.next_u64() for _ in range(100)] == [b.next_u64() for _ in range(100)]


def test_different_streams_differ():
    a = Xoshiro256pp(1, stream=0)
    b = Xoshiro256pp(1, stream=1)
    assert [a.next_u64() for _ in range(8)] != [b.next_u64() for _ in range(8)]


def test_different_seeds_differ():
    a = Xoshiro256pp(1)
    b = Xoshiro256pp(2)
    assert [a.next_u64() for _ in range(8)] != [b.next_u64() for _ in range(8)]


def test_generator_state_advances():
    g = Xoshiro256pp(0)
    first = [g.next_u64() for _ in range(4)]
    assert len(set(first)) == 4


def test_first_outputs_are_stable():
    # regression pin on the generator's output stream; any change to the
    # state mixing or seeding must be deliberate and update these values
    g = Xoshiro256pp(0, stream=0)
    assert [g.next_u64() for _ in range(4)] == [
        5987356902031041503,
        7051070477665621255,
        6633766593972829180,
        211316841551650330,
    ]


@given(st.integers(0, 2**32), st.integers(0, 2**16))
@settings(max_examples=100, deadline=None)
def test_u64_range(seed, stream):
    g = Xoshiro256pp(seed, stream=stream)
    x = g.next_u64()
    assert 0 <= x < 2**64


def test_unit_doubles_in_half_open_interval():
    g = Xoshiro256pp(42)
    xs = [g.random() for _ in range(10000)]
    assert all(0.0 <= x < 1.0 for x in xs)


def test_uniform_respects_bounds():
    g = Xoshiro256pp(9)
    xs = [g.uniform(-2.0, 5.0) for _ in range(1000)]
    assert all(-2.0 <= x < 5.0 for x in xs)


def test_uniform_histogram_is_flat():
    g = Xoshiro256pp(7)
    xs = np.array([g.random() for _ in range(40000)])
    counts, _ = np.histogram(xs, bins=8, range=(0.0, 1.0))
    # each bin is Binomial(40000, 1/8); allow 4.5 standard deviations
    expected = 40000 / 8
    sd = np.sqrt(40000 * (1 / 8) * (7 / 8))
    assert np.all(np.abs(counts - expected) <= 4.5 * sd)


def test_gaussian_moments():
    g = Xoshiro256pp(2024)
    xs = g.normals(20000)
    assert abs(float(np.mean(xs))) <= 0.03
    assert abs(float(np.var(xs)) - 1.0) <= 0.05
    # kurtosis separates a Gaussian from a uniform or heavy-tailed draw
    assert abs(float(np.mean(xs**4)) - 3.0) <= 0.15


def test_normal_pair_returns_two_independentish_values():
    g = Xoshiro256pp(5)
    pairs = np.array([g.normal_pair() for _ in range(5000)])
    corr = np.corrcoef(pairs[:, 0], pairs[:, 1])[0, 1]
    assert abs(corr) <= 0.05


def test_normals_shape_and_determinism():
    assert Xoshiro256pp(3).normals(7).shape == (7,)
    assert np.array_equal(Xoshiro256pp(3, stream=2).normals(6),
                          Xoshiro256pp(3, stream=2).normals(6))
