"""
Configuration settings for model building: caps, preprocessing, pruning,
quantisation and the class model.
"""

import os
from typing import Dict, Any, Optional


def _env_flag(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


def _env_optional_int(name: str) -> Optional[int]:
    value = os.getenv(name)
    return int(value) if value else None


# Size caps for the pruned model
MODEL_CAPS_CONFIG = {
    'n_uni': int(os.getenv('LITE_NGRAM_N_UNI', '100000')),
    'n_bi': int(os.getenv('LITE_NGRAM_N_BI', '200000')),
    'n_tri': int(os.getenv('LITE_NGRAM_N_TRI', '250000')),
}

# Corpus preprocessing
PREP_CONFIG = {
    'rare_threshold': int(os.getenv('LITE_NGRAM_RARE_THRESHOLD', '3')),
    'lowercase_input': _env_flag('LITE_NGRAM_LOWERCASE', True),
    'max_bytes': _env_optional_int('LITE_NGRAM_MAX_BYTES'),  # None reads everything
}

# Trigram pruning score
PRUNE_CONFIG = {
    'alpha': float(os.getenv('LITE_NGRAM_ALPHA', '0.4')),
}

# Probability quantiser: min(floor(-10^c1 * log10 p), c2)
QUANT_CONFIG = {
    'c1': 3,
    'c2': 29999,
}

# Class model
CLASS_CONFIG = {
    'max_classes': int(os.getenv('LITE_NGRAM_MAX_CLASSES', '32')),
    'top_k': int(os.getenv('LITE_NGRAM_CLASS_TOPK', '10')),
}

# zlib level for the data file; pinned so builds are byte-identical
COMPRESSION_LEVEL = 9


def get_model_caps_config() -> Dict[str, Any]:
    """
    Get the model size caps.
    
    Returns:
        Dict with 'n_uni', 'n_bi' and 'n_tri'.
    """
    return MODEL_CAPS_CONFIG.copy()


def get_prep_config() -> Dict[str, Any]:
    """
    Get the corpus preprocessing configuration.
    
    Returns:
        Dict with 'rare_threshold', 'lowercase_input' and 'max_bytes'.
    """
    return PREP_CONFIG.copy()


def get_prune_config() -> Dict[str, Any]:
    """
    Get the pruning configuration.
    
    Returns:
        Dict with 'alpha'.
    """
    return PRUNE_CONFIG.copy()


def get_quant_config() -> Dict[str, Any]:
    """
    Get the quantiser configuration.
    
    Returns:
        Dict with 'c1' and 'c2'.
    """
    return QUANT_CONFIG.copy()


def get_class_config() -> Dict[str, Any]:
    """
    Get the class model configuration.
    
    Returns:
        Dict with 'max_classes' and 'top_k'.
    """
    return CLASS_CONFIG.copy()
