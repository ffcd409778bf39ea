"""
Build manifest: everything a model build needs, from flags or a
"key = value" file.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..errors import ManifestError
from .engine_config import get_engine_config
from .model_config import get_class_config, get_model_caps_config, get_prep_config, get_prune_config

logger = logging.getLogger(__name__)


@dataclass
class BuildManifest:
    """Inputs, caps and scoring parameters of one model build."""
    
    corpus_paths: List[Path]
    output: Path
    blacklist_path: Optional[Path] = None
    lexicon_path: Optional[Path] = None
    n_uni: int = field(default_factory=lambda: get_model_caps_config()['n_uni'])
    n_bi: int = field(default_factory=lambda: get_model_caps_config()['n_bi'])
    n_tri: int = field(default_factory=lambda: get_model_caps_config()['n_tri'])
    rare_threshold: int = field(default_factory=lambda: get_prep_config()['rare_threshold'])
    lowercase: bool = field(default_factory=lambda: get_prep_config()['lowercase_input'])
    max_bytes: Optional[int] = field(default_factory=lambda: get_prep_config()['max_bytes'])
    k: int = field(default_factory=lambda: get_engine_config()['k'])
    lam: float = field(default_factory=lambda: get_engine_config()['lam'])
    r: float = field(default_factory=lambda: get_engine_config()['r'])
    alpha: float = field(default_factory=lambda: get_prune_config()['alpha'])
    max_classes: int = field(default_factory=lambda: get_class_config()['max_classes'])
    class_topk: int = field(default_factory=lambda: get_class_config()['top_k'])
    workers: int = 1

    @property
    def name(self) -> str:
        return self.output.name

    def validate(self) -> None:
        """
        Check referenced paths and parameter ranges.
        
        Raises:
            ManifestError: On the first problem found
        """
        if not self.corpus_paths:
            raise ManifestError("at least one corpus path is required")
        for path in self.corpus_paths:
            if not path.is_file():
                raise ManifestError(f"corpus not found: {path}")
        for label, path in (("blacklist", self.blacklist_path), ("lexicon", self.lexicon_path)):
            if path is not None and not path.is_file():
                raise ManifestError(f"{label} not found: {path}")
        for label, cap in (("n_uni", self.n_uni), ("n_bi", self.n_bi), ("n_tri", self.n_tri)):
            if cap <= 0:
                raise ManifestError(f"{label} must be positive, got {cap}")
        if self.n_uni <= 4:
            raise ManifestError("n_uni must leave room beyond the four tags")
        if self.rare_threshold < 1:
            raise ManifestError("rare_threshold must be at least 1")
        if not 1 <= self.k <= 9:
            raise ManifestError(f"k must be between 1 and 9, got {self.k}")
        if not 0 < self.lam <= 1:
            raise ManifestError(f"lambda must be in (0, 1], got {self.lam}")
        if not 0 <= self.r <= 1:
            raise ManifestError(f"r must be in [0, 1], got {self.r}")
        if not 0 < self.alpha <= 1:
            raise ManifestError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 1 <= self.max_classes <= 256:
            raise ManifestError(f"max_classes must be between 1 and 256, got {self.max_classes}")
        if self.class_topk < 1:
            raise ManifestError("class_topk must be at least 1")
        if self.workers < 1:
            raise ManifestError("workers must be at least 1")

    def to_dict(self) -> Dict[str, Any]:
        return {
            key: ([str(p) for p in value] if isinstance(value, list)
                  else str(value) if isinstance(value, Path) else value)
            for key, value in self.__dict__.items()
        }


def _flag(value: str) -> bool:
    lowered = value.lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(f"not a boolean: {value!r}")


# manifest key -> (field name, converter); path converters are resolved later
_KEYS: Dict[str, tuple] = {
    'corpus': ('corpus_paths', str),
    'output': ('output', str),
    'blacklist': ('blacklist_path', str),
    'lexicon': ('lexicon_path', str),
    'n_uni': ('n_uni', int),
    'n_bi': ('n_bi', int),
    'n_tri': ('n_tri', int),
    'rare_threshold': ('rare_threshold', int),
    'lowercase': ('lowercase', _flag),
    'max_bytes': ('max_bytes', int),
    'k': ('k', int),
    'lambda': ('lam', float),
    'r': ('r', float),
    'alpha': ('alpha', float),
    'max_classes': ('max_classes', int),
    'class_topk': ('class_topk', int),
    'workers': ('workers', int),
}
_PATH_FIELDS = ('output', 'blacklist_path', 'lexicon_path')


def load_manifest(path: Union[str, Path]) -> BuildManifest:
    """
    Parse a manifest file.
    
    Lines are "key = value"; '#' starts a comment. `corpus` may repeat or hold
    a comma-separated list. Relative paths resolve against the manifest's
    directory.
    
    Raises:
        ManifestError: On unknown keys, bad values or missing required keys
    """
    manifest_path = Path(path)
    base = manifest_path.parent
    values: Dict[str, Any] = {'corpus_paths': []}
    try:
        text = manifest_path.read_text(encoding='utf-8')
    except OSError as e:
        raise ManifestError(f"cannot read manifest {manifest_path}: {e}") from e

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ManifestError(f"{manifest_path}:{line_no}: expected 'key = value'")
        key, value = (part.strip() for part in line.split('=', 1))
        if key not in _KEYS:
            raise ManifestError(f"{manifest_path}:{line_no}: unknown key {key!r}")
        field_name, convert = _KEYS[key]
        try:
            if field_name == 'corpus_paths':
                values['corpus_paths'] += [base / p.strip() for p in value.split(',') if p.strip()]
            else:
                converted = convert(value)
                values[field_name] = base / converted if field_name in _PATH_FIELDS else converted
        except ValueError as e:
            raise ManifestError(f"{manifest_path}:{line_no}: bad value for {key}: {e}") from e

    if 'output' not in values:
        raise ManifestError(f"{manifest_path}: missing required key 'output'")
    manifest = BuildManifest(**values)
    logger.info(f"Loaded manifest {manifest_path} for model {manifest.name!r}")
    return manifest
