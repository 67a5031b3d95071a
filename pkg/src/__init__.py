"""
Package initialization file.
""" 