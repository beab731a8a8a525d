"""Bit-level I/O shared by the coders and the container format.

Bits are stored MSB-first within bytes; the final byte of a serialized
stream is zero-padded.
"""

from .errors import DataError


class Bits:
    """Append-only bit sequence."""

    __slots__ = ("_bytes", "_nbits", "_cur", "_curlen")

    def __init__(self, data: bytes = b"", nbits: int | None = None):
        if nbits is None:
            nbits = 8 * len(data)
        if nbits > 8 * len(data):
            raise ValueError("nbits exceeds supplied data")
        self._bytes = bytearray(data)
        self._nbits = nbits
        # strip any partially used trailing byte into the accumulator
        self._cur = 0
        self._curlen = nbits & 7
        if self._curlen:
            last = self._bytes[nbits >> 3]
            self._cur = last >> (8 - self._curlen)
            del self._bytes[nbits >> 3:]
        else:
            del self._bytes[nbits >> 3:]

    def __len__(self) -> int:
        return self._nbits

    def write(self, bit: int) -> None:
        self._cur = (self._cur << 1) | (bit & 1)
        self._curlen += 1
        self._nbits += 1
        if self._curlen == 8:
            self._bytes.append(self._cur)
            self._cur = 0
            self._curlen = 0

    def write_int(self, value: int, width: int) -> None:
        """Append `width` bits of `value`, most significant first."""
        for shift in range(width - 1, -1, -1):
            self.write((value >> shift) & 1)

    def bit_at(self, idx: int) -> int:
        if idx >= self._nbits:
            raise IndexError(idx)
        byte_idx = idx >> 3
        if byte_idx < len(self._bytes):
            return (self._bytes[byte_idx] >> (7 - (idx & 7))) & 1
        return (self._cur >> (self._curlen - 1 - (idx & 7))) & 1

    def to_bytes(self) -> bytes:
        out = bytes(self._bytes)
        if self._curlen:
            out += bytes([self._cur << (8 - self._curlen)])
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Bits):
            return NotImplemented
        return self._nbits == other._nbits and self.to_bytes() == other.to_bytes()

    def __repr__(self) -> str:
        shown = "".join(str(self.bit_at(i)) for i in range(min(self._nbits, 64)))
        if self._nbits > 64:
            shown += "..."
        return f"Bits({self._nbits}:{shown})"


class BitReader:
    """Cursor over a Bits value.

    `read` raises DataError past the end (prefix-code decoding must never
    run off the stream); `read_padded` yields 0 there, which is what the
    arithmetic decoder's register priming needs.
    """

    __slots__ = ("_bits", "pos")

    def __init__(self, bits: Bits):
        self._bits = bits
        self.pos = 0

    def read(self) -> int:
        if self.pos >= len(self._bits):
            raise DataError("bit stream exhausted")
        b = self._bits.bit_at(self.pos)
        self.pos += 1
        return b

    def read_padded(self) -> int:
        if self.pos >= len(self._bits):
            self.pos += 1
            return 0
        b = self._bits.bit_at(self.pos)
        self.pos += 1
        return b

    @property
    def remaining(self) -> int:
        return max(0, len(self._bits) - self.pos)
