"""
Test package initialization.
""" 