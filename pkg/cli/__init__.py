"""Python package initialization file for cli"""
