"""Python package initialization file for nominal/models"""
