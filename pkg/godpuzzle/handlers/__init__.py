"""Command handlers package."""
