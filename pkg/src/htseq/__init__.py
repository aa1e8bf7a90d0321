"""Closed forms of holonomic sequences as hypergeometric-type normal forms."""
