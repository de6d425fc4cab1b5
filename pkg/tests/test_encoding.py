import json

import numpy as np
import pytest

from spintransfer import (Chain, best_excitation_count, eigendecompose, end_to_end_fidelity,
                          end_windows, fidelity_haselgrove, fidelity_multi, fidelity_single,
                          first_peak_time, full_propagator, optimal_encoding, pst_chain,
                          pst_transfer_time, save_encoding, transfer_matrix, uniform_chain)
from spintransfer.spectral import TransferWindow

SQRT2M1 = np.sqrt(2) - 1


def random_chain(rng, n):
    return Chain(n=n, couplings=rng.uniform(-1.5, 1.5, n - 1), fields=rng.uniform(-1, 1, n))


# ---------------------------------------------------------------------------
# transfer matrix
# ---------------------------------------------------------------------------

def test_full_window_is_unitary():
    eig = eigendecompose(uniform_chain(6))
    window = TransferWindow(tuple(range(1, 7)), tuple(range(1, 7)), time=2.3)
    block = transfer_matrix(eig, window)
    s = np.linalg.svd(block.entries, compute_uv=False)
    assert np.allclose(s, 1.0, atol=1e-10)
    assert np.allclose(block.entries, full_propagator(eig, 2.3), atol=1e-12)


def test_disjoint_windows_at_t0_are_dark():
    eig = eigendecompose(uniform_chain(8))
    block = transfer_matrix(eig, end_windows(8, 3, 3, time=0.0))
    assert np.max(np.abs(block.entries)) < 1e-14


def test_pst_end_to_end_entry():
    chain = pst_chain(6)
    t0 = pst_transfer_time(chain)
    block = transfer_matrix(eigendecompose(chain), end_windows(6, 1, 1, t0))
    assert block.entries.shape == (1, 1)
    assert abs(block.entries[0, 0]) == pytest.approx(1.0, abs=1e-9)


def test_singular_values_bounded_random_ensemble():
    rng = np.random.default_rng(53)
    for _ in range(60):
        n = int(rng.integers(3, 25))
        eig = eigendecompose(random_chain(rng, n))
        kin = int(rng.integers(1, n + 1))
        kout = int(rng.integers(1, n + 1))
        window = end_windows(n, kin, kout, rng.uniform(0, 40))
        sol = optimal_encoding(transfer_matrix(eig, window))
        assert np.all(sol.singular_values <= 1 + 1e-10)
        assert np.all(np.diff(sol.singular_values) <= 1e-12)


# ---------------------------------------------------------------------------
# optimal encoding
# ---------------------------------------------------------------------------

def test_encoding_gauge_and_pairing():
    rng = np.random.default_rng(59)
    chain = random_chain(rng, 12)
    eig = eigendecompose(chain)
    window = end_windows(12, 4, 5, time=6.0)
    block = transfer_matrix(eig, window)
    sol = optimal_encoding(block)
    k = sol.singular_values.size
    gram_in = sol.input_vectors.conj() @ sol.input_vectors.T
    gram_out = sol.output_vectors.conj() @ sol.output_vectors.T
    assert np.max(np.abs(gram_in - np.eye(k))) <= 1e-10
    assert np.max(np.abs(gram_out - np.eye(k))) <= 1e-10
    for i in range(k):
        mapped = block.entries @ sol.input_vectors[i]
        assert np.max(np.abs(mapped - sol.singular_values[i] * sol.output_vectors[i])) <= 1e-9
        top = sol.input_vectors[i][np.argmax(np.abs(sol.input_vectors[i]))]
        assert abs(top.imag) <= 1e-12 and top.real > 0


def test_encoding_1x1_magnitude():
    eig = eigendecompose(uniform_chain(5))
    block = transfer_matrix(eig, end_windows(5, 1, 1, time=1.3))
    sol = optimal_encoding(block)
    assert sol.singular_values[0] == pytest.approx(abs(block.entries[0, 0]), abs=1e-12)


def test_encoding_beats_bare_transfer_on_uniform51():
    chain = uniform_chain(51)
    t0, _ = first_peak_time(chain)
    eig = eigendecompose(chain)
    bare = abs(transfer_matrix(eig, end_windows(51, 1, 1, t0)).entries[0, 0])
    sol = optimal_encoding(transfer_matrix(eig, end_windows(51, 5, 5, t0)))
    assert sol.singular_values[0] > bare


def test_window_growth_never_hurts():
    rng = np.random.default_rng(61)
    chain = random_chain(rng, 14)
    eig = eigendecompose(chain)
    t = 5.0
    tops = []
    for k in range(1, 8):
        sol = optimal_encoding(transfer_matrix(eig, end_windows(14, k, k, t)))
        tops.append(sol.singular_values[0])
    assert np.all(np.diff(tops) >= -1e-12)


def test_central_overlap_gives_perfect_code():
    # windows of ceil((N+1)/2) sites at both ends share the central site at t=0
    for n in (7, 10):
        k = (n + 1 + 1) // 2
        eig = eigendecompose(uniform_chain(n))
        sol = optimal_encoding(transfer_matrix(eig, end_windows(n, k, k, time=0.0)))
        assert sol.singular_values[0] == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------------------
# fidelity formulas
# ---------------------------------------------------------------------------

def test_fidelity_single_reference_points():
    assert fidelity_single(1.0) == pytest.approx(1.0, abs=1e-15)
    assert fidelity_single(0.0) == pytest.approx(0.5, abs=1e-15)
    assert fidelity_single(SQRT2M1) == pytest.approx(2 / 3, abs=1e-12)
    with pytest.raises(ValueError):
        fidelity_single(1.5)
    with pytest.raises(ValueError):
        fidelity_single(-0.1)


def test_fidelity_multi_reference_points():
    assert fidelity_multi([1.0, 1.0]) == pytest.approx(1.0, abs=1e-12)
    # frozen by direct evaluation: 1/3 + 1.72^2/6 + (1 - 0.5184 - 0.19*0.36)/6
    assert fidelity_multi([0.9, 0.8]) == pytest.approx(0.895267, abs=1e-6)
    for lam in (0.3, 0.77, 1.0):
        assert fidelity_multi([lam]) == pytest.approx(fidelity_single(lam), abs=1e-15)


def test_fidelity_haselgrove_reference_points():
    assert fidelity_haselgrove([0.9, 0.8]) == pytest.approx(1 / 3 + 1.72 ** 2 / 6, abs=1e-12)
    assert fidelity_haselgrove([0.9, 0.8]) == pytest.approx(0.826400, abs=1e-6)
    assert fidelity_haselgrove([0.42]) == pytest.approx(fidelity_single(0.42), abs=1e-15)
    assert fidelity_haselgrove([1.0, 1.0, 1.0]) == pytest.approx(1.0, abs=1e-12)


def test_best_excitation_count_cases():
    n_opt, f_opt = best_excitation_count([0.45, 0.45])
    assert n_opt == 1
    assert f_opt == pytest.approx(0.68375, abs=1e-6)
    assert fidelity_multi([0.45, 0.45]) == pytest.approx(0.628165, abs=1e-5)
    n_opt, f_opt = best_excitation_count([1.0, 0.9, 0.1])
    assert n_opt == 1 and f_opt == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        best_excitation_count([0.3, 0.5])


def test_best_excitation_count_prefers_multi_when_it_wins():
    # far below the single-excitation threshold, a wide equal-strength code wins
    lams = [0.3] * 15
    assert fidelity_multi(lams) > fidelity_single(0.3)
    n_opt, f_opt = best_excitation_count(lams)
    assert n_opt > 1
    assert f_opt >= fidelity_multi(lams)


def test_multi_excitation_crossover_count():
    # minimum number of equal-strength excitations that can ever beat the
    # single-excitation code, scanned over the sub-threshold range
    crossover = np.inf
    for lam in np.linspace(0.01, SQRT2M1, 500):
        f1 = fidelity_single(lam)
        for n in range(2, 40):
            if fidelity_multi([lam] * n) > f1:
                crossover = min(crossover, n)
                break
    assert crossover == 13


def test_enhancement_is_nonnegative():
    rng = np.random.default_rng(67)
    for _ in range(10_000):
        lam = np.sort(rng.uniform(0, 1, rng.integers(1, 8)))[::-1]
        assert fidelity_multi(lam) - fidelity_haselgrove(lam) >= -1e-12


def test_single_excitation_optimal_above_threshold():
    rng = np.random.default_rng(71)
    for _ in range(10_000):
        lam1 = rng.uniform(SQRT2M1, 1.0)
        rest = np.sort(rng.uniform(0, lam1, rng.integers(0, 9)))[::-1]
        lam = np.concatenate([[lam1], rest])
        f1 = fidelity_single(lam1)
        for k in range(2, lam.size + 1):
            assert f1 >= fidelity_multi(lam[:k]) - 1e-12
        n_opt, _ = best_excitation_count(lam)
        assert n_opt == 1


def test_monotone_in_added_excitation():
    rng = np.random.default_rng(73)
    for _ in range(1_000):
        lam = np.sort(rng.uniform(0, 1, rng.integers(1, 6)))[::-1]
        grid = np.linspace(0, lam[-1], 7)
        vals = [fidelity_multi(np.concatenate([lam, [g]])) for g in grid]
        assert np.all(np.diff(vals) >= -1e-12)


def test_end_to_end_fidelity_reference_points():
    chain = pst_chain(6)
    eig = eigendecompose(chain)
    assert end_to_end_fidelity(eig, pst_transfer_time(chain)) == pytest.approx(1.0, abs=1e-9)
    assert end_to_end_fidelity(eig, 0.0) == pytest.approx(0.5, abs=1e-12)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_encoding_serialization(tmp_path):
    chain = uniform_chain(9)
    eig = eigendecompose(chain)
    window = end_windows(9, 3, 3, time=4.0)
    sol = optimal_encoding(transfer_matrix(eig, window))
    path = tmp_path / "encoding.json"
    save_encoding(sol, path)
    data = json.loads(path.read_text())
    assert data["format_version"] == 1
    assert data["time"] == 4.0
    assert len(data["singular_values"]) == 3
    vec = data["input_vectors"][0]
    assert vec["sites"] == [1, 2, 3]
    flat = np.array(vec["components"])
    recon = flat[0::2] + 1j * flat[1::2]
    assert np.allclose(recon, sol.input_vectors[0], atol=1e-15)
