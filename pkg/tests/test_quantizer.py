"""
Unit tests for the two-byte probability quantiser.
"""

import math

import numpy as np
import pytest

from lite_ngram.binfmt import QuantParams, dequantization_table, dequantize, quantize, quantize_log10
from lite_ngram.binfmt.quantizer import quantize_log10_array
from lite_ngram.errors import QuantizationError


class TestQuantize:
    """Test cases for quantize and dequantize."""

    def test_reference_points(self):
        """Certain events map to 0, one-in-a-thousand to 3000."""
        assert quantize(1.0) == 0
        assert quantize(1e-3) == 3000
        assert quantize(0.5) == 301

    def test_cap(self):
        """Very small probabilities saturate at c2."""
        assert quantize(1e-30) == 29999
        assert quantize(1e-300) == 29999
        assert quantize_log10(-99.0) == 29999

    def test_dequantize(self):
        """dequantize inverts the log scale."""
        assert dequantize(0) == 1.0
        assert dequantize(3000) == pytest.approx(1e-3)
        assert dequantize(29999) == pytest.approx(10 ** -29.999)

    def test_invalid_inputs(self):
        """Probabilities outside (0, 1] and scores above 0 are rejected."""
        for p in (0.0, -0.1, 1.5, float("nan")):
            with pytest.raises(QuantizationError):
                quantize(p)
        with pytest.raises(QuantizationError):
            quantize_log10(0.1)
        with pytest.raises(ValueError):
            dequantize(30000)
        with pytest.raises(QuantizationError):
            dequantize(-1)

    def test_monotonic(self):
        """Larger probabilities never quantise higher."""
        probabilities = np.sort(1.0 - np.random.default_rng(1).random(2000))
        values = [quantize(float(p)) for p in probabilities]
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_error_bound_uniform(self):
        """Round-trip log error stays below 10^-c1 for uniform samples."""
        rng = np.random.default_rng(0)
        for p in 1.0 - rng.random(100_000):
            q = quantize(float(p))
            assert abs(-math.log10(dequantize(q)) + math.log10(p)) < 1e-3

    def test_error_bound_log_uniform(self):
        """The bound also holds across many orders of magnitude."""
        rng = np.random.default_rng(5)
        for exponent in rng.uniform(0, 29, 20_000):
            p = 10 ** -float(exponent)
            q = quantize(p)
            assert abs(-math.log10(dequantize(q)) + math.log10(p)) < 1e-3

    def test_dequantized_not_below_input(self):
        """The floor makes dequantised values round up."""
        for p in (0.3, 0.05, 0.123456, 2e-7):
            assert dequantize(quantize(p)) >= p

    def test_custom_params(self):
        """c1 and c2 control resolution and cap."""
        params = QuantParams(c1=2, c2=500)
        assert quantize(1e-3, params) == 300
        assert quantize(1e-9, params) == 500
        assert dequantize(300, params) == pytest.approx(1e-3)
        with pytest.raises(ValueError):
            QuantParams(c2=70000)


class TestVectorised:
    """Test cases for the table and array helpers."""

    def test_table_matches_scalar(self):
        """Table entries equal dequantize exactly."""
        table = dequantization_table(QuantParams())
        assert len(table) == 30000
        for q in (0, 1, 301, 3000, 29999):
            assert table[q] == dequantize(q)

    def test_table_is_cached(self):
        """The same parameters return the same table object."""
        assert dequantization_table(QuantParams()) is dequantization_table(QuantParams())

    def test_array_matches_scalar(self):
        """The array quantiser agrees with the scalar one."""
        scores = np.array([0.0, -0.30103, -3.0, -12.5, -99.0])
        values = quantize_log10_array(scores)
        assert values.dtype == np.uint16
        assert values.tolist() == [quantize_log10(float(s)) for s in scores]

    def test_array_rejects_positive(self):
        """Positive log scores are rejected."""
        with pytest.raises(QuantizationError):
            quantize_log10_array(np.array([-1.0, 0.5]))
