"""Weighted adaptive entropy coding.

One weight-function abstraction (constant, positional, polynomial,
exponential, interpolated) instantiates static, backward-adaptive,
forward, and generic weighted coding for both a dynamic sibling-property
Huffman engine and an arithmetic engine, with exact-rational model
arithmetic, a canonical container format, and a benchmark harness.
"""

from .api import compress_bytes, decompress_bytes, ideal_bits_estimate
from .arith import arith_decode, arith_encode, ideal_code_length, ideal_product
from .container import (ModelHeader, accounted_sizes, disassemble, parse_header,
                        serialize_header)
from .diagnostics import (cross_entropy, entropy, kl_divergence, trace_model,
                          trace_to_csv)
from .errors import DataError, FormatError, UsageError, WacodeError
from .huffman import HuffmanTree, build_tree, huffman_decode, huffman_encode
from .model import CodingModel, Variant
from .weights import FP_BITS, FP_ONE, GSeq, WeightFn, WeightTable, eval_g, eval_g_fixed

__version__ = "0.1.0"

__all__ = [
    "CodingModel", "DataError", "FormatError", "FP_BITS", "FP_ONE", "GSeq",
    "HuffmanTree", "ModelHeader", "UsageError", "Variant", "WacodeError",
    "WeightFn", "WeightTable", "accounted_sizes", "arith_decode", "arith_encode",
    "build_tree", "compress_bytes", "cross_entropy", "decompress_bytes",
    "disassemble", "entropy", "eval_g", "eval_g_fixed", "huffman_decode",
    "huffman_encode", "ideal_bits_estimate", "ideal_code_length", "ideal_product",
    "kl_divergence", "parse_header", "serialize_header", "trace_model",
    "trace_to_csv",
]
