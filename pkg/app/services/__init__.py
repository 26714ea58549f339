"""Command orchestration shared by the CLI and the HTTP API."""

from .commands import COMMANDS, execute_command, load_program_text, render, render_text, resolve_domain

__all__ = ["COMMANDS", "execute_command", "load_program_text", "render", "render_text", "resolve_domain"]
