"""Shared configuration for behavioural tests."""

from __future__ import annotations

pytest_plugins = ["pytest_bdd"]
