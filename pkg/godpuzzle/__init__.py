"""Exact engine for the three-gods puzzle: answering semantics, search and chances."""
