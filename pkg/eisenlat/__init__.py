# Unimodular Hermitian lattices over the Eisenstein integers
__version__ = "0.1.0"
