"""Shared test configuration: a hypothesis profile without per-example deadlines."""

from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")
