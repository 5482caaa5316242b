"""Step definitions for pytest-bdd behavioural tests."""
