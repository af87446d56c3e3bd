"""Core syntax: atoms, permutations, signatures, terms and environments"""
