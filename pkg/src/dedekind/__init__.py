"""Monotone Boolean functions, the lattices D_n, and exact and modular
Dedekind number computation through orbit-reduced counting kernels."""
from .congruence import ResidueSystem, crt_combine, known_residue, published_constants
from .engines import KernelContext, ResidueWitness
from .intervals import DownTable, build_down_table, interval_count, up_count
from .mbf import Mbf, PosetTable, dual, enumerate_lattice, is_monotone, join, leq, meet
from .symmetry import OrbitTable, apply_perm, build_orbits, canonical, e_complement

__version__ = "0.1.0"

__all__ = [
    "DownTable",
    "KernelContext",
    "Mbf",
    "OrbitTable",
    "PosetTable",
    "ResidueSystem",
    "ResidueWitness",
    "apply_perm",
    "build_down_table",
    "build_orbits",
    "canonical",
    "crt_combine",
    "dual",
    "e_complement",
    "enumerate_lattice",
    "interval_count",
    "is_monotone",
    "join",
    "known_residue",
    "leq",
    "meet",
    "published_constants",
    "up_count",
]
