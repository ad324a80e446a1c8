"""Unit tests for atomic file output."""

import pytest

from src.core.files import atomic_write_text
from src.exceptions import ArtifactWriteError


class TestAtomicWriteText:
    """Tests for atomic_write_text."""

    def test_writes_and_creates_parents(self, tmp_path):
        """Test missing parent directories are created."""
        target = tmp_path / "out" / "nested" / "run.json"

        written = atomic_write_text(target, '{"n": 1}\n')

        assert written == target
        assert target.read_text(encoding="utf-8") == '{"n": 1}\n'

    def test_replaces_existing_file(self, tmp_path):
        """Test an existing file is replaced in full."""
        target = tmp_path / "report.csv"
        target.write_text("old contents that are longer\n")

        atomic_write_text(target, "new\n")

        assert target.read_text() == "new\n"

    def test_leaves_no_temporary_files(self, tmp_path):
        """Test only the target remains after a write."""
        atomic_write_text(tmp_path / "a.txt", "x")

        assert [p.name for p in tmp_path.iterdir()] == ["a.txt"]

    def test_unwritable_location(self, tmp_path):
        """Test a path under a regular file raises ArtifactWriteError."""
        blocker = tmp_path / "file"
        blocker.write_text("")

        with pytest.raises(ArtifactWriteError) as exc_info:
            atomic_write_text(blocker / "run.json", "{}")

        assert exc_info.value.path.endswith("run.json")
