"""
CLI Package
Command-line entry point for code construction and counting
"""
