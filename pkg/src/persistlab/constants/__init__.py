"""Constants for the persistlab package."""

__all__ = ["messages"]
