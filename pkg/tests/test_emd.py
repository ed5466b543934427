import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from emdcast.emd import SiftingConfig, decompose, sift_pass
from emdcast.endcond import METHODS
from emdcast.series import Series, reconstruct


def _random_series(seed, n):
    rng = np.random.default_rng(seed)
    t = np.arange(n)
    return (rng.uniform(-2, 2) * np.sin(2 * np.pi * t / rng.uniform(6, 20))
            + rng.uniform(0.01, 0.1) * t + rng.normal(size=n))


def test_config_validation():
    with pytest.raises(ValueError):
        SiftingConfig(passes_per_imf=0)
    with pytest.raises(ValueError):
        SiftingConfig(max_imfs=0)


def test_sift_pass_leaves_sinusoid_nearly_unchanged():
    t = np.arange(128)
    x = np.sin(2 * np.pi * t / 16)
    h = sift_pass(x, "rato")
    assert np.max(np.abs(h - x)) < 0.02


def test_sift_pass_removes_constant_offset():
    t = np.arange(128)
    x = np.sin(2 * np.pi * t / 16) + 3.0
    h = sift_pass(x, "rato")
    assert np.max(np.abs(h - np.sin(2 * np.pi * t / 16))) < 0.05


@pytest.mark.parametrize("method", sorted(METHODS))
def test_reconstruction_is_exact(method):
    for seed in range(3):
        x = _random_series(seed, 100)
        d = decompose(Series(x), SiftingConfig(method))
        err = np.max(np.abs(reconstruct(d) - x)) / max(1.0, np.max(np.abs(x)))
        assert err <= 1e-9


def test_sinusoid_yields_one_dominant_imf():
    t = np.arange(128)
    x = np.sin(2 * np.pi * t / 16)
    d = decompose(Series(x), SiftingConfig("rato"))
    assert 1 <= len(d.imfs) <= 2
    imf1 = d.imfs[0].values
    r = np.corrcoef(imf1, x)[0, 1]
    assert r > 0.99
    assert np.sqrt(np.mean(d.residue ** 2)) < 0.03


def test_two_tone_separation():
    t = np.arange(256)
    fast = np.sin(2 * np.pi * t / 8)
    slow = np.sin(2 * np.pi * t / 64)
    d = decompose(Series(fast + slow), SiftingConfig("rato"))
    assert len(d.imfs) >= 2
    assert np.sqrt(np.mean((d.imfs[0].values - fast) ** 2)) < 0.1
    # some later component carries the slow tone
    rest = [imf.values for imf in d.imfs[1:]] + [d.residue]
    best = min(np.sqrt(np.mean((c - slow) ** 2)) for c in rest)
    assert best < 0.35


def test_imf_cap_respected():
    x = _random_series(9, 200)
    d = decompose(Series(x), SiftingConfig("rato", max_imfs=2))
    assert len(d.imfs) <= 2
    d_def = decompose(Series(x), SiftingConfig("rato"))
    assert len(d_def.imfs) <= int(np.floor(np.log2(200)))


def test_monotone_series_has_no_imfs():
    x = np.linspace(0, 10, 32)
    d = decompose(Series(x), SiftingConfig("rato"))
    assert len(d.imfs) == 0
    assert np.allclose(d.residue, x)


def test_residue_is_terminal():
    # unless the IMF cap cut extraction short, the residue itself must not
    # yield any further component (it is trend-like or degenerates during
    # sifting)
    x = _random_series(4, 150)
    d = decompose(Series(x), SiftingConfig("sbm"))
    if len(d.imfs) < int(np.floor(np.log2(150))):
        d2 = decompose(Series(np.array(d.residue)), SiftingConfig("sbm"))
        assert len(d2.imfs) == 0


def test_short_series_rejected():
    with pytest.raises(ValueError):
        decompose(Series(np.arange(7, dtype=float)), SiftingConfig())


@given(st.integers(0, 10_000))
@settings(max_examples=15, deadline=None)
def test_reconstruction_property(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(64, 257))
    x = _random_series(seed, n)
    for method in METHODS:
        d = decompose(Series(x), SiftingConfig(method))
        err = np.max(np.abs(reconstruct(d) - x)) / max(1.0, np.max(np.abs(x)))
        assert err <= 1e-9


@pytest.mark.parametrize("method", ["mirror", "coughlin", "sbm", "rato"])
def test_end_conditions_restrain_boundary_envelope_error(method):
    t = np.arange(128)
    x = np.sin(2 * np.pi * t / 16)

    def edge_rms(ec):
        mean_env = x - sift_pass(x, ec)  # the removed mean envelope
        k = 13  # outer 10% of the span, both sides
        return np.sqrt(np.mean(np.concatenate([mean_env[:k],
                                               mean_env[-k:]]) ** 2))

    assert edge_rms(method) < edge_rms("none")
