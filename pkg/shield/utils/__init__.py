"""Utility functions for Shield."""
