"""Exact truncated I-functions of partial flag bundles and cone-membership checks."""

__version__ = "0.1.0"
SCHEMA_VERSION = "fm/1"
