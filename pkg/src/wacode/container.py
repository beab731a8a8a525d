"""Container frame and model-header serialization.

On-disk layout (all multi-byte integers are canonical LEB128 varints;
big magnitudes are length-prefixed big-endian bytes with no leading
zero byte; rationals are reduced numerator/denominator pairs):

    magic "WACx" | version 0x01 | engine | variant | mode | n varint
    | alphabet bitmap (32 bytes) | header_bits varint | payload_bits varint
    | model section | payload (zero-padded to a byte)

The model section is empty for the backward variant (its model is learnt
in sync on both sides); for the other variants it holds the weight
function parameters (weighted only) followed by one exact initial weight
per alphabet symbol in ascending symbol order.  Parsing is strict: any
non-canonical encoding is rejected.  Size accounting: "net" is the
payload bits alone, "header+coding" adds the model-section bits, and the
frame is counted as container overhead.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from gmpy2 import mpq

from .bitio import Bits
from .errors import DataError, FormatError, UsageError
from .model import Variant
from .weights import FP_ONE, WeightFn, WeightTable

MAGIC = b"WACx"
VERSION = 1

_ENGINES = ("huffman", "arith")
_VARIANTS = ("static", "backward", "forward", "weighted")
_MODES = ("exact", "streaming")
_FAMILIES = ("const", "pos", "poly", "exp", "exp2", "interp")


# -- primitive encoders ------------------------------------------------------

def write_uv(out: bytearray, value: int) -> None:
    if value < 0:
        raise ValueError("varint must be nonnegative")
    while True:
        b = value & 0x7F
        value >>= 7
        if value:
            out.append(b | 0x80)
        else:
            out.append(b)
            return


def read_uv(data: bytes, pos: int) -> tuple[int, int]:
    value = 0
    shift = 0
    start = pos
    while True:
        if pos >= len(data):
            raise FormatError("truncated varint")
        b = data[pos]
        pos += 1
        value |= (b & 0x7F) << shift
        shift += 7
        if not b & 0x80:
            if b == 0 and pos - start > 1:
                raise FormatError("non-canonical varint")
            return value, pos


def _write_magnitude(out: bytearray, value: int) -> None:
    if value == 0:
        write_uv(out, 0)
        return
    raw = value.to_bytes((value.bit_length() + 7) // 8, "big")
    write_uv(out, len(raw))
    out.extend(raw)


def _read_magnitude(data: bytes, pos: int) -> tuple[int, int]:
    nbytes, pos = read_uv(data, pos)
    if pos + nbytes > len(data):
        raise FormatError("truncated magnitude")
    if nbytes == 0:
        return 0, pos
    raw = data[pos:pos + nbytes]
    if raw[0] == 0:
        raise FormatError("magnitude has a leading zero byte")
    return int.from_bytes(raw, "big"), pos + nbytes


def _write_rational(out: bytearray, num: int, den: int) -> None:
    if den <= 0 or num < 0 or gcd(num, den) != 1:
        raise ValueError(f"rational {num}/{den} is not canonical")
    _write_magnitude(out, num)
    _write_magnitude(out, den)


def _read_rational(data: bytes, pos: int) -> tuple[int, int, int]:
    num, pos = _read_magnitude(data, pos)
    den, pos = _read_magnitude(data, pos)
    if den == 0:
        raise FormatError("zero denominator")
    if gcd(num, den) != 1:
        raise FormatError("rational not reduced")
    return num, den, pos


def _bitmap(alphabet) -> bytes:
    bits = bytearray(32)
    for sym in alphabet:
        bits[sym >> 3] |= 1 << (sym & 7)
    return bytes(bits)


def _unbitmap(raw: bytes) -> tuple[int, ...]:
    syms = []
    for sym in range(256):
        if raw[sym >> 3] & (1 << (sym & 7)):
            syms.append(sym)
    return tuple(syms)


# -- model header -------------------------------------------------------------

@dataclass(frozen=True)
class ModelHeader:
    """Everything the decoder needs besides the payload bits.

    weights holds canonical (symbol, numerator, denominator) triples for
    the initial model, or None for the backward variant.
    """

    engine: str
    variant: Variant
    mode: str
    n: int
    alphabet: tuple[int, ...]
    weights: tuple[tuple[int, int, int], ...] | None

    def weights_map(self):
        if self.weights is None:
            return None
        return {sym: (num if den == 1 else mpq(num, den))
                for sym, num, den in self.weights}

    def make_table(self) -> WeightTable | None:
        """Reconstruct the initial WeightTable in this header's mode."""
        if self.weights is None:
            return None
        kind = self.variant.kind
        values = {}
        for sym, num, den in self.weights:
            if kind == "static":
                if den != 1:
                    raise FormatError("static model weights must be integers")
                values[sym] = num
            elif self.mode == "streaming":
                if FP_ONE % den:
                    raise FormatError("streaming weight is not 64-bit fixed point")
                values[sym] = num * (FP_ONE // den)
            else:
                values[sym] = num if den == 1 else mpq(num, den)
        return WeightTable(values)


def header_for_model(engine: str, model) -> ModelHeader:
    """Snapshot a CodingModel's initial state (call before coding starts)."""
    variant = model.variant
    if variant.kind == "backward":
        weights = None
    else:
        scaled = variant.kind != "static" and model.mode == "streaming"
        triples = []
        for sym, w in model.table.items():
            q = mpq(w, FP_ONE) if scaled else mpq(w)
            triples.append((sym, int(q.numerator), int(q.denominator)))
        weights = tuple(triples)
    return ModelHeader(engine=engine, variant=variant, mode=model.mode,
                       n=model.n, alphabet=tuple(model.alphabet), weights=weights)


def _write_gspec(out: bytearray, fn: WeightFn) -> None:
    out.append(_FAMILIES.index(fn.family))
    if fn.family == "poly":
        _write_rational(out, fn.k.numerator, fn.k.denominator)
    elif fn.family == "exp":
        _write_rational(out, fn.base.numerator, fn.base.denominator)
    elif fn.family == "interp":
        write_uv(out, fn.j)


def _read_gspec(data: bytes, pos: int) -> tuple[WeightFn, int]:
    if pos >= len(data):
        raise FormatError("truncated weight-function spec")
    fam_idx = data[pos]
    pos += 1
    if fam_idx >= len(_FAMILIES):
        raise FormatError(f"unknown weight family code {fam_idx}")
    family = _FAMILIES[fam_idx]
    try:
        if family == "poly":
            num, den, pos = _read_rational(data, pos)
            return WeightFn("poly", k=Fraction(num, den)), pos
        if family == "exp":
            num, den, pos = _read_rational(data, pos)
            return WeightFn("exp", base=Fraction(num, den)), pos
        if family == "interp":
            j, pos = read_uv(data, pos)
            return WeightFn("interp", j=j), pos
        return WeightFn(family), pos
    except UsageError as exc:
        raise FormatError(f"invalid weight-function parameters: {exc}") from None


def _model_section(header: ModelHeader) -> bytes:
    out = bytearray()
    if header.variant.kind == "backward":
        return bytes(out)
    if header.variant.kind == "weighted":
        _write_gspec(out, header.variant.g)
    for sym, num, den in header.weights:
        if num == 0:
            raise ValueError("zero initial weight cannot be serialized")
        _write_rational(out, num, den)
    return bytes(out)


def serialize_header(header: ModelHeader, payload_bits: int = 0) -> bytes:
    """Frame plus model section, ready to be followed by the payload."""
    if header.engine not in _ENGINES:
        raise UsageError(f"unknown engine {header.engine!r}")
    if header.mode not in _MODES:
        raise UsageError(f"unknown mode {header.mode!r}")
    if not header.alphabet:
        raise UsageError("empty alphabet")
    model = _model_section(header)
    out = bytearray()
    out += MAGIC
    out.append(VERSION)
    out.append(_ENGINES.index(header.engine))
    out.append(_VARIANTS.index(header.variant.kind))
    out.append(_MODES.index(header.mode))
    write_uv(out, header.n)
    out += _bitmap(header.alphabet)
    write_uv(out, 8 * len(model))
    write_uv(out, payload_bits)
    out += model
    return bytes(out)


def parse_header(data: bytes) -> tuple[ModelHeader, int, dict]:
    """Strictly parse frame + model section.

    Returns (header, offset of the payload bytes, size accounting dict).
    """
    if len(data) < 8 or data[:4] != MAGIC:
        raise FormatError("bad magic")
    if data[4] != VERSION:
        raise FormatError(f"unsupported version {data[4]}")
    pos = 5
    try:
        engine = _ENGINES[data[pos]]
        variant_kind = _VARIANTS[data[pos + 1]]
        mode = _MODES[data[pos + 2]]
    except IndexError:
        raise FormatError("bad engine/variant/mode byte") from None
    pos += 3
    n, pos = read_uv(data, pos)
    if n == 0:
        raise FormatError("zero-length text")
    if pos + 32 > len(data):
        raise FormatError("truncated alphabet bitmap")
    alphabet = _unbitmap(data[pos:pos + 32])
    if not alphabet:
        raise FormatError("empty alphabet")
    pos += 32
    header_bits, pos = read_uv(data, pos)
    payload_bits, pos = read_uv(data, pos)
    frame_bits = 8 * pos
    if header_bits % 8:
        raise FormatError("model section must be byte aligned")
    mlen = header_bits // 8
    if pos + mlen > len(data):
        raise FormatError("truncated model section")
    mdata = data[pos:pos + mlen]
    mpos = 0
    gfn = None
    weights = None
    if variant_kind == "backward":
        if mlen != 0:
            raise FormatError("backward variant must have an empty model section")
    else:
        if variant_kind == "weighted":
            gfn, mpos = _read_gspec(mdata, mpos)
        triples = []
        for sym in alphabet:
            num, den, mpos = _read_rational(mdata, mpos)
            if num == 0:
                raise FormatError("zero initial weight")
            triples.append((sym, num, den))
        weights = tuple(triples)
    if mpos != mlen:
        raise FormatError("trailing bytes in model section")
    try:
        variant = Variant(variant_kind, gfn)
    except UsageError as exc:
        raise FormatError(str(exc)) from None
    header = ModelHeader(engine=engine, variant=variant, mode=mode, n=n,
                         alphabet=alphabet, weights=weights)
    sizes = {"frame_bits": frame_bits, "header_bits": header_bits,
             "payload_bits": payload_bits}
    return header, pos + mlen, sizes


def assemble(header: ModelHeader, payload: Bits) -> bytes:
    return serialize_header(header, payload_bits=len(payload)) + payload.to_bytes()


def disassemble(blob: bytes) -> tuple[ModelHeader, Bits, dict]:
    header, offset, sizes = parse_header(blob)
    nbytes = (sizes["payload_bits"] + 7) // 8
    payload_raw = blob[offset:]
    if len(payload_raw) != nbytes:
        raise FormatError("payload length mismatch")
    payload = Bits(payload_raw, nbits=sizes["payload_bits"])
    if payload_raw and sizes["payload_bits"] % 8:
        pad = payload_raw[-1] & ((1 << (8 - sizes["payload_bits"] % 8)) - 1)
        if pad:
            raise FormatError("nonzero padding bits")
    return header, payload, sizes


def accounted_sizes(blob: bytes) -> dict:
    """Exact bit accounting of a container: net payload, model header, frame."""
    _, _, sizes = disassemble(blob)
    return sizes
