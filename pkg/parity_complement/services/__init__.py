"""
Services package for construction and verification logic
"""
