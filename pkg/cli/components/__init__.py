"""
CLI Components Package
Contains reusable output components
"""

from .log_section import LogSection

__all__ = [
    'LogSection'
]
