"""Classify shared images by ideological leaning from who propagates them."""

__version__ = "0.1.0"
