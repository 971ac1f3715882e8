"""Exact wall-crossing computations for moduli of sheaves on K3 surfaces."""
