"""
Configuration settings for model artifact storage.
"""

import os
from typing import Dict, Any

SUPPORTED_STORAGE_TYPES = ('local',)


def get_storage_config() -> Dict[str, Any]:
    """
    Get the storage configuration from the environment.

    Read on every call so a build picks up STORAGE_ROOT changes made after import.

    Returns:
        Dict with 'storage_type', 'storage_root' and 'staging_suffix'
        (suffix of the temp files an artifact set is staged in before the rename).

    Raises:
        ValueError: If STORAGE_TYPE names an unsupported backend
    """
    storage_type = os.getenv('STORAGE_TYPE', 'local').lower()
    if storage_type not in SUPPORTED_STORAGE_TYPES:
        raise ValueError(f"Unsupported storage type: {storage_type}")
    return {
        'storage_type': storage_type,
        'storage_root': os.getenv('STORAGE_ROOT', './models'),
        'staging_suffix': os.getenv('STORAGE_STAGING_SUFFIX', '.tmp'),
    }
