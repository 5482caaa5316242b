"""Behavioural tests for rotorbell."""
