"""Atomic file output shared by checkpoints and CLI artifacts."""

import logging
import os
import tempfile
from pathlib import Path

from src.exceptions import ArtifactWriteError

logger = logging.getLogger(__name__)


def atomic_write_text(path: str | Path, text: str) -> Path:
    """
    Write text to path via a temporary file in the same directory and a rename.

    Readers see either the previous file or the complete new one.

    Raises:
        ArtifactWriteError: If the directory or file cannot be written
    """
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp_name, target)
        except BaseException:
            Path(tmp_name).unlink(missing_ok=True)
            raise
    except OSError as e:
        raise ArtifactWriteError(str(target), e.strerror or str(e)) from e

    logger.debug(f"Wrote {target} ({len(text)} chars)")
    return target
