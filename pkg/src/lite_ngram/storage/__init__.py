"""Artifact storage module."""

from .storage_adapter import LocalStorageAdapter, StorageAdapter, StorageFactory

__all__ = ['LocalStorageAdapter', 'StorageAdapter', 'StorageFactory']
