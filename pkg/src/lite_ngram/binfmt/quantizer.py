"""
Two-byte probability quantiser: q = min(floor(-10^c1 * log10 p), c2).
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List

import numpy as np

from ..config.model_config import get_quant_config
from ..errors import QuantizationError

# -10^c1 * log10 p is rounded to this many decimals before the floor so that
# exact powers of ten are not pushed across an integer boundary by float error
_FLOOR_GUARD_DECIMALS = 9


@dataclass(frozen=True)
class QuantParams:
    """Quantiser exponent and cap."""
    
    c1: int = 3
    c2: int = 29999

    def __post_init__(self) -> None:
        if self.c1 < 0:
            raise ValueError("c1 must be non-negative")
        if not 0 < self.c2 < 65536:
            raise ValueError("c2 must fit in 2 bytes")

    @classmethod
    def from_config(cls) -> "QuantParams":
        config = get_quant_config()
        return cls(c1=config['c1'], c2=config['c2'])

    @property
    def scale(self) -> int:
        return 10 ** self.c1


def quantize_log10(log10_p: float, params: QuantParams = QuantParams()) -> int:
    """
    Quantise a log10 score (<= 0).
    
    Raises:
        QuantizationError: If the score is positive or NaN
    """
    if math.isnan(log10_p) or log10_p > 0:
        raise QuantizationError(f"log10 score {log10_p} outside (-inf, 0]")
    value = round(-params.scale * log10_p, _FLOOR_GUARD_DECIMALS)
    if value >= params.c2:
        return params.c2
    return int(math.floor(value))


def quantize(p: float, params: QuantParams = QuantParams()) -> int:
    """
    Quantise a probability.
    
    Args:
        p: Probability in (0, 1]
        params: Quantiser parameters
        
    Returns:
        Integer in [0, c2]; non-increasing in p
        
    Raises:
        QuantizationError: If p is outside (0, 1]
    """
    if not 0 < p <= 1:
        raise QuantizationError(f"probability {p} outside (0, 1]")
    return quantize_log10(math.log10(p), params)


def quantize_log10_array(log10_scores: np.ndarray, params: QuantParams = QuantParams()) -> np.ndarray:
    """Vectorised quantize_log10, returning uint16."""
    scores = np.asarray(log10_scores, dtype=np.float64)
    if scores.size and (np.isnan(scores).any() or (scores > 0).any()):
        raise QuantizationError("log10 scores must lie in (-inf, 0]")
    values = np.round(-params.scale * scores, _FLOOR_GUARD_DECIMALS)
    return np.minimum(np.floor(values), params.c2).astype(np.uint16)


def dequantize(q: int, params: QuantParams = QuantParams()) -> float:
    """
    Map a quantised value back to a probability, 10^(-q/10^c1).
    
    Raises:
        QuantizationError: If q is outside [0, c2]
    """
    if not 0 <= q <= params.c2:
        raise QuantizationError(f"quantised value {q} outside [0, {params.c2}]")
    return 10 ** (-q / params.scale)


@lru_cache(maxsize=4)
def dequantization_table(params: QuantParams = QuantParams()) -> List[float]:
    """Lookup list indexed by q; entries equal dequantize(q) exactly."""
    return [dequantize(q, params) for q in range(params.c2 + 1)]
