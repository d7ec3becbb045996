import math

import numpy as np
import pytest

from cbir.errors import (
    EmptyGlcmError,
    ImageTooSmallError,
    InsufficientDataError,
    InvalidArgumentError,
    InvariantViolationError,
)
from cbir.imaging import GrayRaster
from cbir.texture import (
    GlcmMatrix,
    TextureClass,
    TextureClassifierModel,
    classify_texture,
    fit_classifier,
    glcm,
    glcm_counts,
    glcm_features,
    image_texture_features,
    quantize,
    texture_activity,
)

# the worked 4x4 fixture: hand-counted ordered pairs at offset (1, 0)
WORKED_RASTER = np.array(
    [[0, 0, 1, 1],
     [0, 0, 1, 1],
     [0, 2, 2, 2],
     [2, 2, 3, 3]],
    dtype=np.uint8,
)
WORKED_PAIRS = {
    (0, 0): 2, (0, 1): 2, (1, 1): 2, (0, 2): 1, (2, 2): 3, (2, 3): 1, (3, 3): 1,
}


def gray(data):
    return GrayRaster(np.asarray(data, dtype=np.uint8))


def quantized(data, levels):
    from cbir.texture import QuantizedRaster

    return QuantizedRaster(np.asarray(data, dtype=np.uint8), levels)


class TestQuantize:
    def test_identity_at_256_levels(self):
        rng = np.random.default_rng(3)
        data = rng.integers(0, 256, size=(5, 5), dtype=np.uint8)
        assert np.array_equal(quantize(gray(data), 256).data, data)

    def test_endpoints(self):
        q = quantize(gray([[0, 255]]), 8)
        assert q.data.tolist() == [[0, 7]]

    def test_midpoint(self):
        assert quantize(gray([[128]]), 8).data[0, 0] == 4

    def test_level_range_enforced(self):
        for bad in (1, 0, 257):
            with pytest.raises(InvalidArgumentError):
                quantize(gray([[0]]), bad)

    def test_every_level_below_count(self):
        rng = np.random.default_rng(7)
        data = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
        for levels in (2, 3, 16, 255):
            q = quantize(gray(data), levels)
            assert q.data.max() < levels


def naive_pair_counts(data, levels, dx, dy):
    """Brute-force ordered pair counting by explicit double loop."""
    h, w = data.shape
    counts = np.zeros((levels, levels))
    for y in range(h):
        for x in range(w):
            yy, xx = y + dy, x + dx
            if 0 <= yy < h and 0 <= xx < w:
                counts[data[y, x], data[yy, xx]] += 1
    return counts


class TestGlcm:
    def test_worked_fixture_pre_symmetrization(self):
        counts = glcm_counts(quantized(WORKED_RASTER, 4), (1, 0))
        assert counts.sum() == 12
        for (i, j), n in WORKED_PAIRS.items():
            assert counts[i, j] == n
        nonzero = {(i, j) for i in range(4) for j in range(4) if counts[i, j] > 0}
        assert nonzero == set(WORKED_PAIRS)

    def test_constant_raster_single_cell(self):
        q = quantize(gray(np.full((4, 4), 200)), 16)
        for offset in ((1, 0), (0, 1), (1, 1), (1, -1)):
            m = glcm(q, offset)
            level = (200 * 16) >> 8
            assert m.cells[level, level] == 1.0
            assert m.cells.sum() == pytest.approx(1.0)

    def test_matches_counting_oracle(self):
        rng = np.random.default_rng(41)
        for _ in range(25):
            data = rng.integers(0, 4, size=(8, 8), dtype=np.uint8)
            q = quantized(data, 4)
            for dx, dy in ((1, 0), (0, 1), (1, 1), (1, -1)):
                expected = naive_pair_counts(data, 4, dx, dy)
                assert np.array_equal(glcm_counts(q, (dx, dy)), expected)
                sym = expected + expected.T
                m = glcm(q, (dx, dy))
                assert np.allclose(m.cells, sym / sym.sum())

    def test_normalized_and_symmetric(self):
        rng = np.random.default_rng(43)
        data = rng.integers(0, 16, size=(12, 9), dtype=np.uint8)
        m = glcm(quantized(data, 16), (1, -1))
        assert m.cells.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.array_equal(m.cells, m.cells.T)

    def test_zero_offset_rejected(self):
        with pytest.raises(InvalidArgumentError):
            glcm_counts(quantized([[0, 1]], 2), (0, 0))

    def test_offset_beyond_raster_is_empty(self):
        with pytest.raises(EmptyGlcmError):
            glcm_counts(quantized([[0, 1]], 2), (5, 0))
        with pytest.raises(EmptyGlcmError):
            glcm_counts(quantized([[0, 1]], 2), (0, 1))


def naive_features(cells):
    """Formula-by-formula evaluation with explicit loops."""
    levels = cells.shape[0]
    entropy = contrast = dissim = homog = energy = mean = 0.0
    for i in range(levels):
        for j in range(levels):
            p = cells[i, j]
            if p > 0:
                entropy -= p * math.log2(p)
            contrast += (i - j) ** 2 * p
            dissim += abs(i - j) * p
            homog += p / (1 + (i - j) ** 2)
            energy += p * p
            mean += i * p
    variance = 0.0
    for i in range(levels):
        for j in range(levels):
            variance += (i - mean) ** 2 * cells[i, j]
    if variance > 0:
        correlation = sum(
            (i - mean) * (j - mean) * cells[i, j]
            for i in range(levels)
            for j in range(levels)
        ) / variance
    else:
        correlation = 0.0
    return entropy, contrast, dissim, homog, energy, correlation, mean, variance


class TestGlcmFeatures:
    def test_single_cell_degenerate(self):
        cells = np.zeros((4, 4))
        cells[2, 2] = 1.0
        f = glcm_features(GlcmMatrix(4, cells, (1, 0)))
        assert f.entropy == 0.0
        assert f.contrast == 0.0
        assert f.dissimilarity == 0.0
        assert f.homogeneity == 1.0
        assert f.energy == 1.0
        assert f.correlation == 0.0
        assert f.mean == 2.0
        assert f.variance == 0.0

    def test_two_cell_fixture(self):
        cells = np.zeros((2, 2))
        cells[0, 1] = cells[1, 0] = 0.5
        f = glcm_features(GlcmMatrix(2, cells, (1, 0)))
        assert f.entropy == pytest.approx(1.0)
        assert f.contrast == pytest.approx(1.0)
        assert f.dissimilarity == pytest.approx(1.0)
        assert f.homogeneity == pytest.approx(0.5)
        assert f.energy == pytest.approx(0.5)
        assert f.mean == pytest.approx(0.5)
        assert f.variance == pytest.approx(0.25)
        assert f.correlation == pytest.approx(-1.0)

    def test_matches_formula_oracle(self):
        rng = np.random.default_rng(47)
        for _ in range(25):
            raw = rng.random((4, 4))
            sym = raw + raw.T
            cells = sym / sym.sum()
            f = glcm_features(GlcmMatrix(4, cells, (1, 0)))
            expected = naive_features(cells)
            got = (f.entropy, f.contrast, f.dissimilarity, f.homogeneity,
                   f.energy, f.correlation, f.mean, f.variance)
            for have, want in zip(got, expected):
                assert abs(have - want) < 1e-9
            assert f.std_dev == pytest.approx(math.sqrt(f.variance))

    def test_unnormalized_matrix_rejected(self):
        cells = np.full((2, 2), 0.2)
        with pytest.raises(InvariantViolationError):
            glcm_features(GlcmMatrix(2, cells, (1, 0)))

    def test_feature_bounds_on_random_rasters(self):
        rng = np.random.default_rng(53)
        for _ in range(20):
            data = rng.integers(0, 256, size=(8, 8), dtype=np.uint8)
            levels = int(rng.choice([4, 8, 16]))
            f = glcm_features(glcm(quantize(gray(data), levels), (1, 0)))
            assert 0.0 < f.energy <= 1.0
            assert 0.0 <= f.entropy <= 2 * math.log2(levels)
            assert 0.0 < f.homogeneity <= 1.0
            assert f.dissimilarity**2 <= f.contrast + 1e-12
            assert f.std_dev**2 == pytest.approx(f.variance)
            assert -1.0 - 1e-12 <= f.correlation <= 1.0 + 1e-12

    def test_image_level_features_average_offsets(self):
        rng = np.random.default_rng(59)
        raster = gray(rng.integers(0, 256, size=(16, 16), dtype=np.uint8))
        combined = image_texture_features(raster, levels=8)
        q = quantize(raster, 8)
        per_offset = [glcm_features(glcm(q, off)) for off in ((1, 0), (0, 1), (1, 1), (1, -1))]
        assert combined.contrast == pytest.approx(
            sum(f.contrast for f in per_offset) / 4
        )
        assert combined.variance == pytest.approx(
            sum(f.variance for f in per_offset) / 4
        )
        assert combined.std_dev == pytest.approx(math.sqrt(combined.variance))


def naive_activity(data, patch):
    """Per-pair enumeration of tile energies."""
    h, w = data.shape
    energies = []
    for ty in range(h // patch):
        for tx in range(w // patch):
            tile = data[ty * patch:(ty + 1) * patch, tx * patch:(tx + 1) * patch]
            total = 0.0
            count = 0
            for y in range(patch):
                for x in range(patch):
                    if x + 1 < patch:
                        total += ((int(tile[y, x + 1]) - int(tile[y, x])) / 255) ** 2
                        count += 1
                    if y + 1 < patch:
                        total += ((int(tile[y + 1, x]) - int(tile[y, x])) / 255) ** 2
                        count += 1
            energies.append(total / count)
    return energies, sum(energies) / len(energies)


class TestTextureActivity:
    def test_constant_image_is_zero(self):
        energies, index = texture_activity(gray(np.full((32, 32), 77)), 16)
        assert index == 0.0
        assert all(e == 0.0 for e in energies)

    def test_checkerboard_is_maximal(self):
        y, x = np.mgrid[0:32, 0:32]
        board = ((x + y) % 2) * 255
        energies, index = texture_activity(gray(board), 16)
        assert index == 1.0
        assert all(e == 1.0 for e in energies)

    def test_matches_pair_oracle(self):
        rng = np.random.default_rng(61)
        data = rng.integers(0, 256, size=(32, 32), dtype=np.uint8)
        energies, index = texture_activity(gray(data), 16)
        expected_energies, expected_index = naive_activity(data, 16)
        assert len(energies) == 4
        for have, want in zip(energies, expected_energies):
            assert abs(have - want) < 1e-12
        assert abs(index - expected_index) < 1e-12

    def test_ragged_remainders_discarded(self):
        rng = np.random.default_rng(67)
        data = rng.integers(0, 256, size=(35, 37), dtype=np.uint8)
        energies, index = texture_activity(gray(data), 16)
        expected_energies, expected_index = naive_activity(data[:32, :32], 16)
        assert energies == pytest.approx(expected_energies)
        assert index == pytest.approx(expected_index)

    def test_invariant_under_intensity_inversion(self):
        rng = np.random.default_rng(71)
        data = rng.integers(0, 256, size=(32, 32), dtype=np.uint8)
        _, index = texture_activity(gray(data), 16)
        _, inverted = texture_activity(gray(255 - data), 16)
        assert index == pytest.approx(inverted, abs=1e-15)

    def test_too_small_image_rejected(self):
        with pytest.raises(ImageTooSmallError):
            texture_activity(gray(np.zeros((8, 8))), 16)

    def test_patch_validation(self):
        with pytest.raises(InvalidArgumentError):
            texture_activity(gray(np.zeros((8, 8))), 1)


class TestClassifier:
    def test_uniform_indices(self):
        model = fit_classifier([0.5, 0.5, 0.5])
        assert model.lambda_hat == pytest.approx(2.0)
        assert model.t_low == pytest.approx(0.5)
        assert model.t_high == pytest.approx(0.5)

    def test_three_point_percentile_fixture(self):
        model = fit_classifier([0.1, 0.2, 0.3])
        # linear-interpolation tertiles of three sorted points
        assert model.t_low == pytest.approx(0.1 + (2 / 3) * 0.1, abs=1e-12)
        assert model.t_high == pytest.approx(0.2 + (1 / 3) * 0.1, abs=1e-12)
        assert model.t_low == pytest.approx(0.1667, abs=5e-4)
        assert model.t_high == pytest.approx(0.2333, abs=5e-4)

    def test_separated_bands_put_thresholds_in_gaps(self):
        rng = np.random.default_rng(73)
        indices = np.concatenate([
            rng.uniform(0.0, 0.1, 100),
            rng.uniform(0.4, 0.5, 100),
            rng.uniform(0.8, 0.9, 100),
        ])
        model = fit_classifier(list(indices))
        assert 0.1 < model.t_low < 0.4
        assert 0.5 < model.t_high < 0.8

    def test_insufficient_data_rejected(self):
        with pytest.raises(InsufficientDataError):
            fit_classifier([0.1, 0.2])

    def test_out_of_range_indices_rejected(self):
        with pytest.raises(InvalidArgumentError):
            fit_classifier([0.1, 0.2, 1.5])

    def test_zero_mean_gives_infinite_rate(self):
        model = fit_classifier([0.0, 0.0, 0.0])
        assert model.lambda_hat == math.inf

    def test_classification_boundaries(self):
        model = TextureClassifierModel(t_low=0.2, t_high=0.6, lambda_hat=3.0)
        assert classify_texture(0.0, model) is TextureClass.LOW
        assert classify_texture(0.2, model) is TextureClass.AVERAGE
        assert classify_texture(0.6, model) is TextureClass.AVERAGE
        assert classify_texture(1.0, model) is TextureClass.HIGH

    def test_equal_thresholds_boundary(self):
        model = TextureClassifierModel(t_low=0.5, t_high=0.5, lambda_hat=2.0)
        assert classify_texture(0.5, model) is TextureClass.AVERAGE

    def test_calibration_corpus_splits_into_near_thirds(self):
        rng = np.random.default_rng(79)
        for n in (30, 100, 301):
            indices = list(rng.uniform(0, 1, n))
            model = fit_classifier(indices)
            counts = {cls: 0 for cls in TextureClass}
            for idx in indices:
                counts[classify_texture(idx, model)] += 1
            for cls, count in counts.items():
                assert abs(count - n / 3) <= 2, (n, cls, counts)
