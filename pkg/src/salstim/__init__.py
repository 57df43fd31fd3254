"""Synthetic low-level-feature stimulus generation and gaze-based saliency evaluation."""

__version__ = "0.1.0"
