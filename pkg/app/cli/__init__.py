"""Batch front-end: argument parsing, command handlers and report emitters."""

from app.cli.runner import main, run

__all__ = ["main", "run"]
