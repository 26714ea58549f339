"""Bundled hpGCL programs used by the case studies."""
