"""
Storage abstraction for model artifacts.

Artifacts are written under a storage root. Writes go to a temporary file
that is renamed into place, so a reader never sees a half-written model.
A set of artifacts is swapped in together: when one rename fails, the
artifacts it replaced are restored.
"""

import logging
import os
import tempfile
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional


class StorageAdapter(ABC):
    """Abstract base class for storage adapters."""
    
    @abstractmethod
    def save(self, path: str, content: bytes) -> bool:
        """
        Save one artifact.
        
        Args:
            path: Storage path for the artifact
            content: Artifact bytes
            
        Returns:
            True if successful
            
        Raises:
            OSError: If the write fails
        """
        pass

    @abstractmethod
    def save_many(self, artifacts: Mapping[str, bytes]) -> bool:
        """
        Save a set of artifacts so that either all or none become visible.
        
        Args:
            artifacts: Storage path -> bytes
            
        Returns:
            True if successful
            
        Raises:
            OSError: If any write fails; nothing is left behind
        """
        pass
    
    @abstractmethod
    def load(self, path: str) -> Optional[bytes]:
        """
        Load an artifact.
        
        Args:
            path: Storage path of the artifact
            
        Returns:
            Bytes if found, None otherwise
        """
        pass
    
    @abstractmethod
    def exists(self, path: str) -> bool:
        """
        Check if an artifact exists at path.
        
        Args:
            path: Storage path to check
            
        Returns:
            True if exists, False otherwise
        """
        pass
    
    @abstractmethod
    def delete(self, path: str) -> bool:
        """
        Delete an artifact.
        
        Args:
            path: Storage path to delete
            
        Returns:
            True if successful, False otherwise
        """
        pass


class LocalStorageAdapter(StorageAdapter):
    """Local filesystem storage adapter."""
    
    def __init__(self, storage_root: Optional[str] = None, staging_suffix: str = '.tmp'):
        """
        Initialize local storage adapter.
        
        Args:
            storage_root: Root directory for artifacts. Defaults to environment variable
                         STORAGE_ROOT or './models' if not set.
            staging_suffix: Suffix of the temp files artifacts are staged in
        """
        self.storage_root = Path(storage_root or os.getenv('STORAGE_ROOT', './models'))
        self.staging_suffix = staging_suffix
        self.storage_root.mkdir(parents=True, exist_ok=True)
        self.logger = logging.getLogger(__name__)
    
    def full_path(self, path: str) -> Path:
        """Get full filesystem path for a storage path."""
        return self.storage_root / path

    def _write_temp(self, path: str, content: bytes) -> Path:
        target = self.full_path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, temp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=self.staging_suffix, dir=target.parent)
        try:
            with os.fdopen(fd, 'wb') as f:
                f.write(content)
        except OSError:
            Path(temp_name).unlink(missing_ok=True)
            raise
        return Path(temp_name)
    
    def save(self, path: str, content: bytes) -> bool:
        """
        Save an artifact via temp file and rename.
        
        Raises:
            OSError: If file system operations fail
        """
        return self.save_many({path: content})

    def save_many(self, artifacts: Mapping[str, bytes]) -> bool:
        """
        Write every artifact to a temp file first, then rename them all.

        Artifacts already in place are moved to a backup before their rename
        and moved back if any later rename fails, so readers see either the
        old set or the new one.
        
        Raises:
            OSError: If a write or rename fails; staged and backup files are removed
        """
        staged: Dict[str, Path] = {}
        backups: Dict[str, Path] = {}
        committed: List[str] = []
        try:
            for path, content in artifacts.items():
                staged[path] = self._write_temp(path, content)
            for path, temp in staged.items():
                target = self.full_path(path)
                if target.exists():
                    backup = temp.with_name(temp.name + '.bak')
                    os.replace(target, backup)
                    backups[path] = backup
                os.replace(temp, target)
                committed.append(path)
        except OSError as e:
            self._roll_back(staged, backups, committed)
            error_msg = f"Failed to save artifacts {sorted(artifacts)}: {str(e)}"
            self.logger.error(error_msg)
            raise OSError(error_msg) from e
        for backup in backups.values():
            backup.unlink(missing_ok=True)
        return True

    def _roll_back(self, staged: Mapping[str, Path], backups: Mapping[str, Path],
                   committed: List[str]) -> None:
        for path, temp in staged.items():
            target = self.full_path(path)
            try:
                if path in backups:
                    os.replace(backups[path], target)
                elif path in committed:
                    target.unlink(missing_ok=True)
            except OSError as e:
                self.logger.error(f"Could not restore {path}: {str(e)}")
            temp.unlink(missing_ok=True)
    
    def load(self, path: str) -> Optional[bytes]:
        """
        Load an artifact from the local filesystem.
        
        Returns:
            Bytes if found, None otherwise
        """
        try:
            return self.full_path(path).read_bytes()
        except FileNotFoundError:
            return None
    
    def exists(self, path: str) -> bool:
        return self.full_path(path).exists()
    
    def delete(self, path: str) -> bool:
        """
        Delete an artifact from the local filesystem.
        
        Returns:
            True if successful, False otherwise
        """
        try:
            full_path = self.full_path(path)
            if full_path.exists():
                full_path.unlink()
            return True
        except OSError as e:
            self.logger.error(f"Error deleting {path}: {str(e)}")
            return False


class StorageFactory:
    """Factory class for creating storage adapters based on configuration."""
    
    @staticmethod
    def create_adapter(config: Dict[str, Any]) -> StorageAdapter:
        """
        Create a storage adapter based on configuration.
        
        Args:
            config: Storage configuration dictionary containing:
                - storage_type: 'local'
                - storage_root: Root directory for local storage (optional)
                - staging_suffix: Temp file suffix for staged writes (optional)
        
        Returns:
            Configured storage adapter instance
            
        Raises:
            ValueError: If storage_type is unsupported
        """
        storage_type = config.get('storage_type', 'local').lower()
        
        if storage_type == 'local':
            storage_root = config.get('storage_root', './models')
            return LocalStorageAdapter(storage_root, config.get('staging_suffix', '.tmp'))
        else:
            raise ValueError(f"Unsupported storage type: {storage_type}")
