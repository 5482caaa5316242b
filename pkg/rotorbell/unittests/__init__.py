"""Unit tests for the rotorbell package."""
