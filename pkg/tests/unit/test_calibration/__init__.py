"""Unit tests for the calibration package."""
