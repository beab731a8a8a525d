"""Information-theoretic measurements: entropy, KL divergence, model traces.

Distributions are plain dicts mapping byte symbols to exact rationals
summing to 1.  Logarithms go through 192-bit mpfr arithmetic so the
documented 1e-12 tolerances are honest; anything that must hold exactly
(theorem checks) compares rational products elsewhere and never
touches a logarithm.
"""

import csv
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr, mpq

from .errors import UsageError
from .huffman import _tree_for_model
from .model import CodingModel, Variant

_PRECISION = 192


def check_distribution(p: dict) -> None:
    if not p:
        raise UsageError("empty distribution")
    total = mpq(0)
    for v in p.values():
        if v < 0:
            raise UsageError("negative probability")
        total += mpq(v)
    if total != 1:
        raise UsageError(f"probabilities sum to {total}, not 1")


def entropy(p: dict):
    """-sum p log2 p in bits (0 log 0 := 0), as a high-precision mpfr."""
    check_distribution(p)
    with gmpy2.context(precision=_PRECISION):
        acc = mpfr(0)
        for v in p.values():
            if v > 0:
                q = mpq(v)
                acc -= q * gmpy2.log2(mpfr(q))
        return acc


def cross_entropy(p: dict, q: dict):
    """-sum p log2 q: expected bits when coding P with Q's code."""
    check_distribution(p)
    check_distribution(q)
    with gmpy2.context(precision=_PRECISION):
        acc = mpfr(0)
        for sym, pv in p.items():
            if pv > 0:
                qv = mpq(q.get(sym, 0))
                if qv <= 0:
                    raise UsageError(f"support mismatch at symbol {sym}")
                acc -= mpq(pv) * gmpy2.log2(mpfr(qv))
        return acc


def kl_divergence(p: dict, q: dict):
    """sum p log2(p/q); nonnegative, zero iff the distributions are equal."""
    check_distribution(p)
    check_distribution(q)
    with gmpy2.context(precision=_PRECISION):
        acc = mpfr(0)
        for sym, pv in p.items():
            if pv > 0:
                qv = mpq(q.get(sym, 0))
                if qv <= 0:
                    raise UsageError(f"support mismatch at symbol {sym}")
                acc += mpq(pv) * gmpy2.log2(mpfr(mpq(pv) / qv))
        return acc


@dataclass
class TraceRow:
    position: int
    symbol: int
    weights: dict
    q: object          # exact rational, or None when the model is all-zero
    bits: int | None   # codeword length (huffman engine only)
    info: float | None  # -log2 q


def _neg_log2(q) -> float:
    with gmpy2.context(precision=_PRECISION):
        return float(gmpy2.log2(mpfr(mpq(q).denominator))
                     - gmpy2.log2(mpfr(mpq(q).numerator)))


def trace_model(data: bytes, variant: Variant, engine: str = "huffman",
                mode: str = "exact") -> list[TraceRow]:
    """Per-position record of the live model along a coding pass.

    Each row snapshots the weights in force when that position is coded,
    the coded symbol's model probability, and the bits it costs (the
    current codeword length for huffman, -log2 q for arith).
    """
    if not data:
        raise UsageError("empty input")
    if engine not in ("huffman", "arith"):
        raise UsageError(f"unknown engine {engine!r}")
    n = len(data)
    model = CodingModel(variant, n, mode, engine, data=data)
    table = model.table
    tree = _tree_for_model(model) if engine == "huffman" else None
    rows = []
    for i in range(1, n + 1):
        sym = data[i - 1]
        snapshot = table.as_dict()
        q = table.probability_of(sym) if table.total > 0 else None
        info = _neg_log2(q) if q is not None else None
        if tree is not None:
            bits = tree.depths().get(sym)
            if bits is None:
                raise UsageError("symbol missing from the code tree")
            if len(tree) < 2:
                bits = 0
        else:
            bits = None
        rows.append(TraceRow(i, sym, snapshot, q, bits, info))
        new_w = model.advance(i, sym)
        if tree is not None and new_w is not None:
            tree.change_weight(sym, new_w)
    return rows


def _show_sym(sym: int) -> str:
    if 33 <= sym <= 126:
        return chr(sym)
    if sym == 32:
        return "' '"
    return f"0x{sym:02x}"


def trace_to_csv(rows: list[TraceRow], fp) -> None:
    writer = csv.writer(fp)
    writer.writerow(["position", "symbol", "active_weights", "q", "bits", "info_bits"])
    for r in rows:
        weights = ";".join(f"{_show_sym(s)}:{w}" for s, w in sorted(r.weights.items()))
        writer.writerow([
            r.position, _show_sym(r.symbol), weights,
            "" if r.q is None else str(r.q),
            "" if r.bits is None else r.bits,
            "" if r.info is None else f"{r.info:.6f}",
        ])
