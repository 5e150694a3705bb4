"""Puzzle core: worlds, questions, god answering semantics and beliefs."""
