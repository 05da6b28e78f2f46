"""Rendering of designs to files."""
