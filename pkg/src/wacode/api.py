"""High-level one-shot compression API used by the CLI and the harness."""

import math

from . import arith, container, huffman
from .errors import UsageError
from .model import CodingModel, Variant


def compress_bytes(data: bytes, engine: str, variant: Variant,
                   mode: str = "streaming") -> tuple[bytes, dict]:
    """Encode data into a container blob; returns (blob, stats dict)."""
    if engine == "huffman":
        header, payload = huffman.huffman_encode(data, variant, mode)
    elif engine == "arith":
        header, payload = arith.arith_encode(data, variant, mode)
    else:
        raise UsageError(f"unknown engine {engine!r}")
    blob = container.assemble(header, payload)
    stats = make_stats(blob, len(data))
    return blob, stats


def decompress_bytes(blob: bytes) -> bytes:
    header, payload, _ = container.disassemble(blob)
    if header.engine == "huffman":
        return huffman.huffman_decode(header, payload)
    return arith.arith_decode(header, payload)


def make_stats(blob: bytes, input_len: int) -> dict:
    header, _, sizes = container.disassemble(blob)
    input_bits = 8 * input_len
    net = sizes["payload_bits"]
    hdr = sizes["header_bits"]
    return {
        "engine": header.engine,
        "variant": header.variant.label(),
        "mode": header.mode,
        "n": header.n,
        "input_bytes": input_len,
        "net_bits": net,
        "header_bits": hdr,
        "frame_bits": sizes["frame_bits"],
        "total_bytes": len(blob),
        "net_ratio": net / input_bits,
        "combined_ratio": (net + hdr) / input_bits,
        "total_ratio": 8 * len(blob) / input_bits,
    }


def ideal_bits_estimate(data: bytes, variant: Variant,
                        mode: str = "streaming") -> float:
    """Float-accumulated -sum log2 q over the coded positions.

    Fast enough for corpus-size reports; the exact-rational version for
    theorem checks is arith.ideal_code_length.
    """
    if not data:
        raise UsageError("empty input")
    n = len(data)
    model = CodingModel(variant, n, mode, "arith", data=data)
    table = model.table
    acc = 0.0
    for i in range(1, n + 1):
        sym = data[i - 1]
        if table.active_count >= 2:
            acc -= math.log2(table.weight(sym) / table.total)
        model.advance(i, sym)
    return acc
