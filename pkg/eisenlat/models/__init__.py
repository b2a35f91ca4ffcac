# Exact arithmetic, lattices, codes and file schemas
from eisenlat.models.eisenstein import EisInt, EisRat, F4Elem
from eisenlat.models.code import F4Code
from eisenlat.models.lattice import AmbientSpace, HermitianLattice

__all__ = ["AmbientSpace", "EisInt", "EisRat", "F4Code", "F4Elem", "HermitianLattice"]
