"""Test package for lite_ngram."""
