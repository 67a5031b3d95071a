"""
Utilities package initialization file.
""" 