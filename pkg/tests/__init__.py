"""Initialize tests module"""

__all__ = []
