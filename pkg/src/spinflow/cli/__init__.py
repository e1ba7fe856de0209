"""
CLI commands for SpinFlow.
"""
