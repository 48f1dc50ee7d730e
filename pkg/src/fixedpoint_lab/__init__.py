"""Fixed-point laboratory for the maps z -> z^d + c on finite residue rings."""

__version__ = "0.1.0"
