"""
Unit tests for the storage adapter.
"""

import os
import tempfile
from pathlib import Path
from unittest.mock import patch

import pytest

from lite_ngram.config.storage_config import get_storage_config
from lite_ngram.storage import LocalStorageAdapter, StorageFactory


class TestLocalStorageAdapter:
    """Test cases for LocalStorageAdapter."""

    def test_init_with_custom_root(self):
        """Test initialization with custom storage root."""
        with tempfile.TemporaryDirectory() as temp_dir:
            root = Path(temp_dir) / "models"
            adapter = LocalStorageAdapter(str(root))
            assert adapter.storage_root == root
            assert root.is_dir()

    def test_init_with_env_var(self):
        """Test initialization with environment variable."""
        with tempfile.TemporaryDirectory() as temp_dir:
            with patch.dict(os.environ, {'STORAGE_ROOT': temp_dir}):
                adapter = LocalStorageAdapter()
                assert adapter.storage_root == Path(temp_dir)

    def test_save_and_load(self):
        """Test saving and loading bytes."""
        with tempfile.TemporaryDirectory() as temp_dir:
            adapter = LocalStorageAdapter(temp_dir)
            path = "nested/model.ngram"

            assert adapter.save(path, b"\x00\x01payload") is True
            assert adapter.load(path) == b"\x00\x01payload"
            assert adapter.exists(path) is True
            assert adapter.full_path(path) == Path(temp_dir) / "nested" / "model.ngram"

    def test_save_overwrites(self):
        """Test that a second save replaces the artifact."""
        with tempfile.TemporaryDirectory() as temp_dir:
            adapter = LocalStorageAdapter(temp_dir)
            adapter.save("model.vocab", b"old")
            adapter.save("model.vocab", b"new")
            assert adapter.load("model.vocab") == b"new"

    def test_no_temp_files_left(self):
        """Test that only the final artifacts remain after a save."""
        with tempfile.TemporaryDirectory() as temp_dir:
            adapter = LocalStorageAdapter(temp_dir)
            adapter.save_many({"m.vocab": b"v", "m.ngram": b"n", "m.class": b"c"})
            assert sorted(p.name for p in Path(temp_dir).iterdir()) == ["m.class", "m.ngram", "m.vocab"]

    def test_save_many_failure_leaves_nothing(self):
        """Test that a failed staging write leaves no artifact and no temp file."""
        with tempfile.TemporaryDirectory() as temp_dir:
            adapter = LocalStorageAdapter(temp_dir)
            (Path(temp_dir) / "blocker").write_bytes(b"")

            with pytest.raises(OSError, match="Failed to save artifacts"):
                adapter.save_many({"good.vocab": b"v", "blocker/bad.ngram": b"n"})

            assert adapter.exists("good.vocab") is False
            assert sorted(p.name for p in Path(temp_dir).iterdir()) == ["blocker"]

    def test_rename_failure_cleans_temp_files(self):
        """Test that temp files are removed when the rename fails."""
        with tempfile.TemporaryDirectory() as temp_dir:
            adapter = LocalStorageAdapter(temp_dir)
            with patch('lite_ngram.storage.storage_adapter.os.replace',
                       side_effect=OSError("disk full")):
                with pytest.raises(OSError):
                    adapter.save("m.vocab", b"v")
            assert list(Path(temp_dir).iterdir()) == []

    def test_partial_rename_restores_previous_set(self):
        """Test that a rename failing midway puts every old artifact back."""
        with tempfile.TemporaryDirectory() as temp_dir:
            adapter = LocalStorageAdapter(temp_dir)
            adapter.save_many({"m.vocab": b"old vocab", "m.ngram": b"old ngram"})
            real_replace = os.replace
            staged_renames = []

            def fail_second_rename(src, dst):
                if str(src).endswith('.tmp'):
                    staged_renames.append(dst)
                    if len(staged_renames) == 2:
                        raise OSError("disk full")
                real_replace(src, dst)

            with patch('lite_ngram.storage.storage_adapter.os.replace', side_effect=fail_second_rename):
                with pytest.raises(OSError, match="Failed to save artifacts"):
                    adapter.save_many({"m.vocab": b"new vocab", "m.ngram": b"new ngram"})

            assert len(staged_renames) == 2
            assert adapter.load("m.vocab") == b"old vocab"
            assert adapter.load("m.ngram") == b"old ngram"
            assert sorted(p.name for p in Path(temp_dir).iterdir()) == ["m.ngram", "m.vocab"]

    def test_partial_rename_removes_new_artifacts(self):
        """Test that artifacts without a predecessor are removed on a failed swap."""
        with tempfile.TemporaryDirectory() as temp_dir:
            adapter = LocalStorageAdapter(temp_dir)
            real_replace = os.replace
            calls = []

            def fail_second_rename(src, dst):
                calls.append(dst)
                if len(calls) == 2:
                    raise OSError("disk full")
                real_replace(src, dst)

            with patch('lite_ngram.storage.storage_adapter.os.replace', side_effect=fail_second_rename):
                with pytest.raises(OSError):
                    adapter.save_many({"m.vocab": b"v", "m.ngram": b"n"})

            assert list(Path(temp_dir).iterdir()) == []

    def test_no_backup_files_left(self):
        """Test that a successful overwrite removes its backups."""
        with tempfile.TemporaryDirectory() as temp_dir:
            adapter = LocalStorageAdapter(temp_dir)
            adapter.save_many({"m.vocab": b"v1", "m.ngram": b"n1"})
            adapter.save_many({"m.vocab": b"v2", "m.ngram": b"n2"})
            assert adapter.load("m.ngram") == b"n2"
            assert sorted(p.name for p in Path(temp_dir).iterdir()) == ["m.ngram", "m.vocab"]

    def test_load_nonexistent(self):
        """Test loading a missing artifact."""
        with tempfile.TemporaryDirectory() as temp_dir:
            adapter = LocalStorageAdapter(temp_dir)
            assert adapter.load("nonexistent/model.class") is None
            assert adapter.exists("nonexistent/model.class") is False

    def test_delete(self):
        """Test deleting an artifact, present or not."""
        with tempfile.TemporaryDirectory() as temp_dir:
            adapter = LocalStorageAdapter(temp_dir)
            adapter.save("model.arpa", b"\\data\\")
            assert adapter.delete("model.arpa") is True
            assert adapter.exists("model.arpa") is False
            assert adapter.delete("model.arpa") is True


class TestStorageFactory:
    """Test cases for StorageFactory."""

    def test_create_local_adapter(self):
        """Test creating a local storage adapter."""
        with tempfile.TemporaryDirectory() as temp_dir:
            adapter = StorageFactory.create_adapter({'storage_type': 'LOCAL', 'storage_root': temp_dir})
            assert isinstance(adapter, LocalStorageAdapter)
            assert adapter.storage_root == Path(temp_dir)

    def test_unsupported_storage_type(self):
        """Test creating an adapter with an unsupported type."""
        with pytest.raises(ValueError, match="Unsupported storage type"):
            StorageFactory.create_adapter({'storage_type': 's3'})

    def test_staging_suffix_from_config(self):
        """Staged writes use the configured suffix and leave nothing behind."""
        with tempfile.TemporaryDirectory() as temp_dir:
            env = {'STORAGE_ROOT': temp_dir, 'STORAGE_STAGING_SUFFIX': '.partial'}
            with patch.dict(os.environ, env):
                adapter = StorageFactory.create_adapter(get_storage_config())
            assert adapter.staging_suffix == '.partial'
            adapter.save_many({"m.vocab": b"v", "m.ngram": b"n"})
            assert sorted(p.name for p in Path(temp_dir).iterdir()) == ["m.ngram", "m.vocab"]


class TestStorageConfig:
    """Test cases for get_storage_config."""

    def test_defaults(self):
        """Unset variables fall back to local storage under ./models."""
        with patch.dict(os.environ, {}, clear=True):
            config = get_storage_config()
        assert config == {'storage_type': 'local', 'storage_root': './models', 'staging_suffix': '.tmp'}

    def test_read_at_call_time(self):
        """Changes to the environment after import are picked up."""
        with patch.dict(os.environ, {'STORAGE_TYPE': 'LOCAL', 'STORAGE_ROOT': '/data/models'}):
            config = get_storage_config()
        assert config['storage_type'] == 'local'
        assert config['storage_root'] == '/data/models'

    def test_unsupported_type(self):
        """An unknown backend is rejected."""
        with patch.dict(os.environ, {'STORAGE_TYPE': 'gcs'}):
            with pytest.raises(ValueError, match="Unsupported storage type"):
                get_storage_config()
