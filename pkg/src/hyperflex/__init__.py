"""Numerical and symbolic machinery for genus-3 theta constants, the
hyperflex and Clebsch modular forms of plane quartics, and the boundary
divisor-class calculus on compactified moduli."""

__version__ = "0.1.0"

from .chars import Char, char, decode_label, encode_label, parity, triple_sign

__all__ = [
    "Char",
    "char",
    "decode_label",
    "encode_label",
    "parity",
    "triple_sign",
    "__version__",
]
