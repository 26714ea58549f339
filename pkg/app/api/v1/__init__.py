"""API v1 endpoints for the QSL verification workbench."""

from . import workbench
