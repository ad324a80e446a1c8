"""Unit tests for the experiments package."""
