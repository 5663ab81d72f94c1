"""Focused macro-actions for black-box planning with the goal-count heuristic."""

__version__ = "0.1.0"
