"""Experiment configuration, execution, and result files."""
