"""Model build job module."""

from .build_job import BuildReport, ModelBuildJob

__all__ = ['BuildReport', 'ModelBuildJob']
