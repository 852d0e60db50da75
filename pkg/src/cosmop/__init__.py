"""Integrated task and motion planning with bounded temporal logic and SMT."""

__version__ = "0.1.0"
