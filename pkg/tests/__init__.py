"""
Tests for SpinFlow.
"""
