"""Per-variant model trajectories shared by both coding engines.

A Variant names one of the four coding protocols; a CodingModel owns the
live WeightTable for a single pass over an n-symbol text and applies the
per-position update rule.  Encoder and decoder drive identical
CodingModels, which is what keeps the two sides synchronized.

Protocols:
  static    fixed occurrence counts, never updated
  backward  counts of the already-seen prefix; +1 after each symbol
            (the arithmetic engine smooths with +1 so no live symbol
            ever has probability zero)
  forward   whole-text counts; -1 after each symbol
  weighted  whole-text g-sums; -g(i) after the symbol at position i
"""

from dataclasses import dataclass

from .errors import DataError, UsageError
from .weights import GSeq, WeightFn, WeightTable

VARIANT_KINDS = ("static", "backward", "forward", "weighted")

_CONST = WeightFn("const")


@dataclass(frozen=True)
class Variant:
    kind: str
    g: WeightFn | None = None

    def __post_init__(self):
        if self.kind not in VARIANT_KINDS:
            raise UsageError(f"unknown variant {self.kind!r}")
        if self.kind == "weighted":
            if self.g is None:
                raise UsageError("weighted variant requires a weight function")
        elif self.g is not None:
            raise UsageError(f"variant {self.kind!r} does not take a weight function")

    def effective_g(self) -> WeightFn:
        return self.g if self.kind == "weighted" else _CONST

    def label(self) -> str:
        if self.kind == "weighted":
            return f"weighted({self.g.label()})"
        return self.kind


class CodingModel:
    """Live weight trajectory for one encode or decode pass."""

    def __init__(self, variant: Variant, n: int, mode: str, engine: str, *,
                 data: bytes | None = None,
                 table: WeightTable | None = None,
                 alphabet=None):
        if mode not in ("exact", "streaming"):
            raise UsageError(f"unknown mode {mode!r}")
        if n <= 0:
            raise UsageError("empty input")
        self.variant = variant
        self.n = n
        self.mode = mode
        self._gmode = "exact" if mode == "exact" else "fixed"
        self.engine = engine
        self._pos = 0
        self._g_iter = None

        kind = variant.kind
        if kind == "backward":
            if alphabet is None:
                if data is None:
                    raise UsageError("backward model needs data or an alphabet")
                alphabet = sorted(set(data))
            self.alphabet = tuple(sorted(set(alphabet)))
            if engine == "arith":
                self.table = WeightTable.ones(self.alphabet)
            else:
                self.table = WeightTable.zeros(self.alphabet)
            return

        if table is not None:
            self.table = table
        elif data is not None:
            if kind == "static":
                self.table = WeightTable.counts(data)
            else:
                gseq = GSeq(variant.effective_g(), n, self._gmode)
                self.table = WeightTable.forward(data, gseq)
        else:
            raise UsageError("model needs data or a parsed table")
        self.alphabet = tuple(self.table.symbols())
        if kind in ("forward", "weighted"):
            self._g_iter = GSeq(variant.effective_g(), n, self._gmode).ascending()

    def coding_symbols(self) -> int:
        """Number of symbols the code tree / interval layout must cover."""
        if self.variant.kind == "backward" and self.engine != "arith":
            return len(self.alphabet)
        return self.table.active_count

    def advance(self, i: int, sym: int):
        """Apply the post-symbol update for position i.

        Returns the symbol's new weight, or None when the model is static.
        """
        self._pos += 1
        if i != self._pos:
            raise DataError(f"model stepped out of order: {i} != {self._pos}")
        kind = self.variant.kind
        if kind == "static":
            return None
        if kind == "backward":
            self.table.update_backward(sym, 1)
            return self.table.weight(sym)
        g = next(self._g_iter)
        self.table.update_forward(sym, g)
        return self.table.weight(sym)
