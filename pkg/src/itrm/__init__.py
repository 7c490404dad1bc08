"""Infinite-time register machines: ordinals, programs, oracles and an accelerated runner."""

__version__ = "0.1.0"
