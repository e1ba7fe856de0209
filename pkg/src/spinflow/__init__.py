"""
SpinFlow: periodic solutions of the Schrödinger flow on S² from closed initial curves.
"""
