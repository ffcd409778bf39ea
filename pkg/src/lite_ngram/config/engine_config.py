"""
Configuration settings for the suggestion engine.
"""

import os
from typing import Dict, Any

ENGINE_CONFIG = {
    'k': int(os.getenv('LITE_NGRAM_K', '3')),
    'lam': float(os.getenv('LITE_NGRAM_LAMBDA', '0.4')),
    'r': float(os.getenv('LITE_NGRAM_R', '0.5')),
    'parallel_load': os.getenv('LITE_NGRAM_PARALLEL_LOAD', 'true').lower() == 'true',
    'lenient_load': os.getenv('LITE_NGRAM_LENIENT_LOAD', 'false').lower() == 'true',
}


def get_engine_config() -> Dict[str, Any]:
    """
    Get the engine configuration.
    
    Returns:
        Dict with 'k', 'lam', 'r', 'parallel_load' and 'lenient_load'.
    """
    return ENGINE_CONFIG.copy()
