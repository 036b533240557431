"""Utility modules for persistlab."""

__all__ = ["budget", "logging", "records", "validation"]
