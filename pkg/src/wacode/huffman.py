"""Dynamic Huffman engine over a sibling-property node list.

The tree keeps an explicit node list sorted by nondecreasing weight in
which slots (2t, 2t+1) always hold a sibling pair and the root sits
last; by the sibling property such a tree is Huffman-optimal for its
current leaf weights.  A weight change applies the delta along the
leaf-to-root path and keeps the structure whenever the list is still
sorted; otherwise the tree is rebuilt from the live weights with a
deterministic tie-break (lower weight first, then leaf before internal
node, then smaller symbol / earlier creation).  Removal splices the
sibling into the parent's slot.  Both coder sides run the identical
rule, so their trees never diverge.

Codeword bits are the root-to-leaf child sides (left = 0, right = 1).
A single-leaf tree assigns the empty codeword.
"""

from collections import deque

from .bitio import BitReader, Bits
from .container import ModelHeader, header_for_model
from .errors import DataError, UsageError
from .model import CodingModel, Variant

DEBUG_VALIDATE = False


class _Node:
    __slots__ = ("sym", "w", "parent", "left", "right", "slot")

    def __init__(self, sym, w):
        self.sym = sym
        self.w = w
        self.parent = None
        self.left = None
        self.right = None
        self.slot = -1

    def __repr__(self):
        kind = f"leaf {self.sym}" if self.sym is not None else "node"
        return f"<{kind} w={self.w}>"


class HuffmanTree:
    """Sibling-property Huffman tree over a symbol -> weight mapping."""

    def __init__(self, weights: dict, *, remove_at_zero: bool = True):
        if not weights:
            raise UsageError("cannot build a tree with no symbols")
        self.remove_at_zero = remove_at_zero
        self.rebuilds = 0
        self._leaves = {sym: _Node(sym, w) for sym, w in weights.items()}
        if all(w == 0 for w in weights.values()):
            self._build_zero_canonical()
        else:
            self._rebuild()

    # -- construction -----------------------------------------------------

    def _install(self, order):
        self._order = order
        self._wk = [node.w for node in order]
        for idx, node in enumerate(order):
            node.slot = idx
        if DEBUG_VALIDATE:
            self.validate()

    def _rebuild(self):
        self.rebuilds += 1
        leaves = sorted(self._leaves.values(), key=lambda nd: (nd.w, nd.sym))
        if len(leaves) == 1:
            root = leaves[0]
            root.parent = None
            self.root = root
            self._install([root])
            return
        q1 = deque(leaves)
        q2 = deque()
        order = []

        def pop_min():
            if q1 and q2:
                return q1.popleft() if q1[0].w <= q2[0].w else q2.popleft()
            return q1.popleft() if q1 else q2.popleft()

        remaining = len(leaves)
        while remaining > 1:
            a = pop_min()
            b = pop_min()
            parent = _Node(None, a.w + b.w)
            parent.left = a
            parent.right = b
            a.parent = parent
            b.parent = parent
            order.append(a)
            order.append(b)
            q2.append(parent)
            remaining -= 1
        root = pop_min()
        root.parent = None
        order.append(root)
        self.root = root
        self._install(order)

    def _build_zero_canonical(self):
        """Initial all-zero tree: ascending symbols get canonical codewords
        with nondecreasing lengths (the balanced equal-weight profile)."""
        syms = sorted(self._leaves)
        m = len(syms)
        if m == 1:
            root = self._leaves[syms[0]]
            root.parent = None
            self.root = root
            self._install([root])
            return
        # balanced equal-weight depth profile: all depths within 1 of ceil(log2 m)
        d = (m - 1).bit_length()
        deep = 2 * (m - (1 << (d - 1)))
        lengths = [d - 1] * (m - deep) + [d] * deep
        # canonical codes, ascending symbol <-> nondecreasing length
        codes = []
        code = 0
        prev = lengths[0]
        for ln in lengths:
            code <<= ln - prev
            codes.append((code, ln))
            code += 1
            prev = ln
        root = _Node(None, 0)
        placed = {}
        for sym, (cv, ln) in zip(syms, codes):
            node = root
            for shift in range(ln - 1, 0, -1):
                bit = (cv >> shift) & 1
                nxt = node.right if bit else node.left
                if nxt is None:
                    nxt = _Node(None, 0)
                    nxt.parent = node
                    if bit:
                        node.right = nxt
                    else:
                        node.left = nxt
                node = nxt
            leaf = self._leaves[sym]
            leaf.parent = node
            if cv & 1:
                node.right = leaf
            else:
                node.left = leaf
        # sibling list: depth descending, code value ascending within depth
        ranked = []

        def walk(node, depth, val):
            if node is not root:
                ranked.append((-depth, val, node))
            if node.sym is None:
                walk(node.left, depth + 1, val << 1)
                walk(node.right, depth + 1, (val << 1) | 1)

        walk(root, 0, 0)
        ranked.sort(key=lambda item: (item[0], item[1]))
        order = [node for _, _, node in ranked]
        order.append(root)
        self.root = root
        self._install(order)

    # -- queries ------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._leaves)

    def __contains__(self, sym) -> bool:
        return sym in self._leaves

    def single_symbol(self) -> int:
        if self.root is None or self.root.sym is None:
            raise DataError("no unique symbol remains")
        return self.root.sym

    def codeword(self, sym: int) -> tuple[int, int]:
        """(value, bit length) of sym's current codeword."""
        node = self._leaves.get(sym)
        if node is None:
            raise DataError(f"symbol {sym} not in tree")
        # the climb fills bit positions from the low end, so bit length-1
        # (the root-side choice) already leads when read MSB-first
        value = 0
        length = 0
        while node.parent is not None:
            value |= (0 if node.parent.left is node else 1) << length
            length += 1
            node = node.parent
        return value, length

    def depths(self) -> dict[int, int]:
        out = {}
        for sym, node in self._leaves.items():
            d = 0
            while node.parent is not None:
                d += 1
                node = node.parent
            out[sym] = d
        return out

    def cost(self):
        """Total weighted codeword length (0 for a singleton)."""
        total = 0
        for node in self._leaves.values():
            w = node.w
            d = 0
            while node.parent is not None:
                d += 1
                node = node.parent
            total += w * d
        return total

    # -- coding ---------------------------------------------------------------

    def encode_symbol(self, sym: int, out: Bits) -> int:
        value, length = self.codeword(sym)
        out.write_int(value, length)
        return length

    def decode_symbol(self, reader: BitReader) -> int:
        node = self.root
        if node is None:
            raise DataError("decode on an empty tree")
        while node.sym is None:
            node = node.right if reader.read() else node.left
        return node.sym

    # -- updates ----------------------------------------------------------------

    def change_weight(self, sym: int, new_w) -> None:
        leaf = self._leaves.get(sym)
        if leaf is None:
            raise DataError(f"symbol {sym} not in tree")
        if new_w < 0:
            raise DataError("negative weight")
        delta = new_w - leaf.w
        if delta == 0:
            return
        node = leaf
        touched = []
        while node is not None:
            node.w = node.w + delta
            self._wk[node.slot] = node.w
            touched.append(node.slot)
            node = node.parent
        if new_w == 0 and self.remove_at_zero:
            self._splice(leaf)
            if self._order and not self._sorted_everywhere():
                self._rebuild()
            if DEBUG_VALIDATE and self._order:
                self.validate()
            return
        wk = self._wk
        last = len(wk) - 1
        for s in touched:
            if (s > 0 and wk[s - 1] > wk[s]) or (s < last and wk[s] > wk[s + 1]):
                self._rebuild()
                return
        if DEBUG_VALIDATE:
            self.validate()

    def _sorted_everywhere(self) -> bool:
        wk = self._wk
        return all(wk[i] <= wk[i + 1] for i in range(len(wk) - 1))

    def _splice(self, leaf) -> None:
        del self._leaves[leaf.sym]
        if len(self._order) == 1:
            self.root = None
            self._order = []
            self._wk = []
            return
        parent = leaf.parent
        sib = parent.left if parent.right is leaf else parent.right
        pair_lo = min(leaf.slot, sib.slot)
        jp = parent.slot
        grand = parent.parent
        sib.parent = grand
        if grand is None:
            self.root = sib
        elif grand.left is parent:
            grand.left = sib
        else:
            grand.right = sib
        del self._order[pair_lo:pair_lo + 2]
        del self._wk[pair_lo:pair_lo + 2]
        jp -= 2
        self._order[jp] = sib
        self._wk[jp] = sib.w
        for idx in range(pair_lo, len(self._order)):
            self._order[idx].slot = idx

    # -- integrity -----------------------------------------------------------

    def validate(self) -> None:
        order, wk = self._order, self._wk
        n = len(order)
        assert n == 2 * len(self._leaves) - 1, "node count mismatch"
        for idx, node in enumerate(order):
            assert node.slot == idx
            assert wk[idx] == node.w
        assert all(wk[i] <= wk[i + 1] for i in range(n - 1)), "weights not sorted"
        assert order[-1] is self.root and self.root.parent is None
        for t in range((n - 1) // 2):
            a, b = order[2 * t], order[2 * t + 1]
            p = a.parent
            assert p is not None and p is b.parent, "pair is not a sibling pair"
            assert {id(p.left), id(p.right)} == {id(a), id(b)}
            assert p.slot > 2 * t + 1, "parent below its children"
        for node in order:
            if node.sym is None:
                assert node.w == node.left.w + node.right.w, "bad internal weight"
            else:
                assert self._leaves.get(node.sym) is node


def build_tree(table_or_weights, *, remove_at_zero: bool = True) -> HuffmanTree:
    """Huffman tree for a WeightTable or a plain symbol -> weight mapping."""
    weights = (table_or_weights.as_dict()
               if hasattr(table_or_weights, "as_dict") else dict(table_or_weights))
    return HuffmanTree(weights, remove_at_zero=remove_at_zero)


def _tree_for_model(model: CodingModel) -> HuffmanTree:
    if model.variant.kind == "backward":
        return HuffmanTree({sym: 0 for sym in model.alphabet}, remove_at_zero=False)
    return HuffmanTree(model.table.as_dict(),
                       remove_at_zero=model.variant.kind != "static")


def huffman_encode(data: bytes, variant: Variant,
                   mode: str = "exact") -> tuple[ModelHeader, Bits]:
    """Encode data under the given variant; returns (header, payload bits).

    Bit emission stops for any suffix in which a single symbol remains
    active; the decoder infers the run from the model and n.
    """
    if not data:
        raise UsageError("empty input")
    n = len(data)
    model = CodingModel(variant, n, mode, "huffman", data=data)
    header = header_for_model("huffman", model)
    tree = _tree_for_model(model)
    bits = Bits()
    for i in range(1, n + 1):
        sym = data[i - 1]
        if len(tree) >= 2:
            tree.encode_symbol(sym, bits)
        elif tree.single_symbol() != sym:
            raise DataError("model desynchronized from input")
        new_w = model.advance(i, sym)
        if new_w is not None:
            tree.change_weight(sym, new_w)
    return header, bits


def huffman_decode(header: ModelHeader, payload: Bits) -> bytes:
    """Exact inverse of huffman_encode for the same header."""
    if header.engine != "huffman":
        raise DataError(f"header is for engine {header.engine!r}")
    variant = header.variant
    model = CodingModel(variant, header.n, header.mode, "huffman",
                        table=header.make_table(), alphabet=header.alphabet)
    tree = _tree_for_model(model)
    reader = BitReader(payload)
    out = bytearray()
    for i in range(1, header.n + 1):
        if len(tree) >= 2:
            sym = tree.decode_symbol(reader)
        else:
            sym = tree.single_symbol()
        out.append(sym)
        new_w = model.advance(i, sym)
        if new_w is not None:
            tree.change_weight(sym, new_w)
    if reader.remaining:
        raise DataError("trailing payload bits")
    return bytes(out)
