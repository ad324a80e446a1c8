"""Unit tests for the intervals package."""
