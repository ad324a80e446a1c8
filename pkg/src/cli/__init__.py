"""Command-line front end."""

from src.cli.artifacts import (
    FORMAT_VERSION,
    RunArtifact,
    read_artifact,
    regenerate,
    replay,
    write_artifact,
)
from src.cli.config import Command, OutputFormat, RunConfig, build_config, load_config_file
from src.cli.main import execute, main, run_cli

__all__ = [
    "FORMAT_VERSION",
    "Command",
    "OutputFormat",
    "RunArtifact",
    "RunConfig",
    "build_config",
    "execute",
    "load_config_file",
    "main",
    "read_artifact",
    "regenerate",
    "replay",
    "run_cli",
    "write_artifact",
]
