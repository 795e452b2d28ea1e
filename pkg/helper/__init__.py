"""
Helper Package
Field towers, abelian groups, splittings, ideal codes and counting
"""
