"""Services for persistlab."""

from .pool import BlockPool

__all__ = ["BlockPool"]
