"""Criterion outcomes collected by test_acceptance and printed at the end of the run."""
RESULTS: dict = {}
