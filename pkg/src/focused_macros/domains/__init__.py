"""Benchmark domains, each exposing an ``ActionTable`` and a ``Simulator``."""
