"""Parser and pretty-printer for the script language"""
