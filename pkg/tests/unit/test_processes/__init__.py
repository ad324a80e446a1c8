"""Unit tests for the processes package."""
