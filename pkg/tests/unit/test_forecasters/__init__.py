"""Unit tests for the forecasters package."""
