"""Proof kernel, decision procedures, compiler and search"""
