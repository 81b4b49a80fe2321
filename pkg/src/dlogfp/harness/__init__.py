"""Experiment driver, persistence, tables, figures and CLI."""
