"""
Suggestion engine module initialization.
"""

from .engine import Branch, Engine, EngineConfig, Suggestion, load_model, model_paths
from .topk import TopKSelector

__all__ = ['Branch', 'Engine', 'EngineConfig', 'Suggestion', 'TopKSelector', 'load_model', 'model_paths']
