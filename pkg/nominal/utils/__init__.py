"""Python package initialization file for nominal/utils"""
