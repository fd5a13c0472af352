"""The pattern-matching index over a quotient graph.

Classes live at (chain, position) coordinates of a minimum chain partition of
the class order. A convex class set is one half-open position interval per
chain. One symbol step ("follow") binary-searches, for every target chain, the
per-(target chain, symbol, source chain) edge groups; the reached positions on
each chain are filled in to an interval, which is exact because images of
convex sets are convex. Two storage backends answer the same contract: "plain"
keeps python arrays, "compact" keeps bit-packed arrays whose sizes the space
report measures.
"""

from __future__ import annotations

import struct
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bitvec import BitVector, PackedArray, bisect_left_packed, width_for
from .chains import ChainPartition
from .graph import MARKERS, Alphabet
from .quotient import QuotientGraph, QuotientNfa

MAGIC = b"CLXI"
FORMAT_VERSION = 1

_FLAG_FINALS = 1
_FLAG_INITIAL = 2


class PatternError(ValueError):
    """Pattern contains a marker or a symbol outside the alphabet."""


@dataclass
class QueryStats:
    """Caller-owned instrumentation: one probe = one group lookup."""

    probes: int = 0
    symbols: int = 0


@dataclass(frozen=True)
class ConvexSet:
    """One half-open within-chain position interval per chain."""

    intervals: tuple[tuple[int, int], ...]

    def is_empty(self) -> bool:
        return all(lo >= hi for lo, hi in self.intervals)

    def size(self) -> int:
        return sum(hi - lo for lo, hi in self.intervals if hi > lo)


def ceil_log2(x: int) -> int:
    """Smallest w with 2**w >= x; 0 for x <= 1."""
    return (x - 1).bit_length() if x > 1 else 0


def parse_pattern(alphabet: Alphabet, text: str) -> list[str]:
    """Split CLI pattern text into symbols.

    Whitespace-separated tokens if any whitespace is present; otherwise each
    character is a symbol (falling back to the whole string when it is itself
    an alphabet symbol). Markers are rejected.
    """
    if text == "":
        return []
    tokens = text.split() if any(c.isspace() for c in text) else list(text)
    if len(tokens) > 1 and not all(t in alphabet for t in tokens) and text in alphabet:
        tokens = [text]
    for t in tokens:
        if t in MARKERS:
            raise PatternError(f"marker {t!r} cannot appear in a pattern")
        if t not in alphabet:
            raise PatternError(f"unknown symbol {t!r}")
    return tokens


@dataclass(frozen=True)
class SpaceReport:
    measured_bits: int
    formula_bits: int
    breakdown: dict[str, int] = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        return self.measured_bits / self.formula_bits if self.formula_bits else float("inf")


class _PlainStore:
    """Reference backend: per-group python tuples, bisect on sources."""

    def __init__(self, q: int, group_edges: dict[tuple[int, int, int], list[tuple[int, int]]]):
        self.q = q
        self.groups = {
            key: (tuple(t for t, _ in edges), tuple(s for _, s in edges))
            for key, edges in group_edges.items()
        }
        self.target_chains = _invert_group_keys(self.groups)

    def run(self, j: int, sym: int, i: int, lo: int, hi: int) -> tuple[int, int] | None:
        group = self.groups.get((j, sym, i))
        if group is None:
            return None
        targets, sources = group
        p = bisect_left(sources, lo)
        r = bisect_left(sources, hi)
        if p == r:
            return None
        return targets[p], targets[r - 1]

    def group_items(self):
        return sorted(self.groups.items())


def _invert_group_keys(groups) -> dict[tuple[int, int], tuple[int, ...]]:
    """(symbol, source chain) -> target chains with a nonempty group.

    Derived acceleration metadata (reconstructible from the group directory,
    like the rank directories); lets follow skip guaranteed-empty probes.
    """
    by_source: dict[tuple[int, int], set[int]] = {}
    for j, sym, i in groups:
        by_source.setdefault((sym, i), set()).add(j)
    return {key: tuple(sorted(js)) for key, js in by_source.items()}


class _CompactChain:
    __slots__ = ("keys", "ends", "targets", "sources")

    def __init__(self, keys: PackedArray, ends: PackedArray,
                 targets: PackedArray, sources: PackedArray):
        self.keys = keys
        self.ends = ends
        self.targets = targets
        self.sources = sources


class _CompactStore:
    """Measured backend: per-chain group directory plus packed position arrays."""

    def __init__(self, q: int, sigma: int, chain_lengths: Sequence[int],
                 group_edges: dict[tuple[int, int, int], list[tuple[int, int]]]):
        self.q = q
        self.sigma = sigma
        max_len = max(chain_lengths, default=1)
        self.source_width = width_for(max(max_len - 1, 0))
        self.key_width = width_for(max(sigma * q - 1, 0))
        self.target_chains = _invert_group_keys(group_edges)
        per_chain: list[list[tuple[int, list[tuple[int, int]]]]] = [[] for _ in range(q)]
        for (j, sym, i), edges in group_edges.items():
            per_chain[j].append((sym * q + i, edges))
        self.chains: list[_CompactChain] = []
        for j in range(q):
            groups = sorted(per_chain[j])
            keys, ends, targets, sources = [], [], [], []
            for key, edges in groups:
                keys.append(key)
                for t, s in edges:
                    targets.append(t)
                    sources.append(s)
                ends.append(len(targets))
            e_j = len(targets)
            self.chains.append(_CompactChain(
                PackedArray(self.key_width, keys),
                PackedArray(width_for(e_j), ends),
                PackedArray(width_for(max(chain_lengths[j] - 1, 0)), targets),
                PackedArray(self.source_width, sources),
            ))

    def run(self, j: int, sym: int, i: int, lo: int, hi: int) -> tuple[int, int] | None:
        ch = self.chains[j]
        key = sym * self.q + i
        g = bisect_left_packed(ch.keys, key, 0, len(ch.keys))
        if g == len(ch.keys) or ch.keys.get(g) != key:
            return None
        start = ch.ends.get(g - 1) if g > 0 else 0
        end = ch.ends.get(g)
        p = bisect_left_packed(ch.sources, lo, start, end)
        r = bisect_left_packed(ch.sources, hi, start, end)
        if p == r:
            return None
        return ch.targets.get(p), ch.targets.get(r - 1)

    def group_items(self):
        items = []
        for j, ch in enumerate(self.chains):
            start = 0
            for g in range(len(ch.keys)):
                end = ch.ends.get(g)
                key = ch.keys.get(g)
                sym, i = divmod(key, self.q)
                ts = tuple(ch.targets.get(k) for k in range(start, end))
                ss = tuple(ch.sources.get(k) for k in range(start, end))
                items.append(((j, sym, i), (ts, ss)))
                start = end
        return sorted(items)

    def payload_bits(self) -> dict[str, int]:
        directory = sum(ch.keys.payload_bits + ch.ends.payload_bits for ch in self.chains)
        positions = sum(ch.targets.payload_bits + ch.sources.payload_bits for ch in self.chains)
        return {"group_directory_bits": directory, "position_array_bits": positions}


class Index:
    """Immutable query structure; all methods are safe for concurrent readers."""

    def __init__(self, *, alphabet: Alphabet, chains: tuple[tuple[int, ...], ...],
                 members: tuple[tuple[int, ...], ...], n_original: int, e_original: int,
                 group_edges: dict[tuple[int, int, int], list[tuple[int, int]]],
                 finals: frozenset[int] | None, initial_class: int | None,
                 marked_classes: frozenset[int], backend: str,
                 order_bits: np.ndarray | None = None):
        if backend not in ("plain", "compact"):
            raise ValueError(f"unknown backend {backend!r}")
        self.alphabet = alphabet
        self.chains = chains
        self.members = members
        self.n_original = n_original
        self.e_original = e_original
        self.finals = finals
        self.initial_class = initial_class
        self.marked_classes = marked_classes
        self.backend = backend
        self._order_bits = order_bits
        self.q = len(chains)
        self.n_classes = len(members)
        self.e_quotient = sum(len(edges) for edges in group_edges.values())
        self.chain_of = [0] * self.n_classes
        self.pos_in_chain = [0] * self.n_classes
        for j, chain in enumerate(chains):
            for pos, cid in enumerate(chain):
                self.chain_of[cid] = j
                self.pos_in_chain[cid] = pos
        self._group_edges = {k: list(v) for k, v in group_edges.items()}
        _check_monotone_groups(group_edges)
        if backend == "plain":
            self._store = _PlainStore(self.q, group_edges)
        else:
            self._store = _CompactStore(self.q, len(alphabet), [len(c) for c in chains],
                                        group_edges)
        self._boundaries = self._build_boundaries()
        self._finals_bv = None
        if finals is not None:
            self._finals_bv = tuple(
                BitVector([1 if cid in finals else 0 for cid in chain]) for chain in chains)

    def _build_boundaries(self) -> tuple[BitVector, ...]:
        indeg = [[0] * len(chain) for chain in self.chains]
        for (j, _, _), edges in self._group_edges.items():
            for t, _ in edges:
                indeg[j][t] += 1
            # one unary run per node: 1 then a 0 per incoming edge
        out = []
        for j, chain in enumerate(self.chains):
            bits: list[int] = []
            for t in range(len(chain)):
                bits.append(1)
                bits.extend([0] * indeg[j][t])
            out.append(BitVector(bits))
        return tuple(out)

    # Convex-set constructors ------------------------------------------------

    def full_set(self) -> ConvexSet:
        return ConvexSet(tuple((0, len(c)) for c in self.chains))

    def empty_set(self) -> ConvexSet:
        return ConvexSet(tuple((0, 0) for _ in self.chains))

    def set_for_classes(self, class_ids: Iterable[int]) -> ConvexSet:
        """Intervals covering exactly the given classes; they must be contiguous per chain."""
        per_chain: dict[int, list[int]] = {}
        for cid in class_ids:
            per_chain.setdefault(self.chain_of[cid], []).append(self.pos_in_chain[cid])
        intervals = []
        for j in range(self.q):
            positions = sorted(per_chain.get(j, []))
            if not positions:
                intervals.append((0, 0))
                continue
            lo, hi = positions[0], positions[-1] + 1
            if positions != list(range(lo, hi)):
                raise ValueError(f"classes are not contiguous on chain {j}")
            intervals.append((lo, hi))
        return ConvexSet(tuple(intervals))

    def classes_in(self, s: ConvexSet) -> list[int]:
        out = []
        for j, (lo, hi) in enumerate(s.intervals):
            out.extend(self.chains[j][lo:hi])
        return sorted(out)

    # Queries ----------------------------------------------------------------

    def _symbol_id(self, a: str) -> int:
        if a in MARKERS:
            raise PatternError(f"marker {a!r} cannot appear in a pattern")
        if a not in self.alphabet:
            raise PatternError(f"unknown symbol {a!r}")
        return self.alphabet.index(a)

    def follow(self, s: ConvexSet, a: str, stats: QueryStats | None = None) -> ConvexSet:
        """Classes reachable from ``s`` by one edge labeled ``a``, as intervals."""
        if len(s.intervals) != self.q:
            raise ValueError("convex set does not match this index's chain count")
        sym = self._symbol_id(a)
        if stats is not None:
            stats.symbols += 1
        mins = [-1] * self.q
        maxs = [-1] * self.q
        target_chains = self._store.target_chains
        for i, (lo, hi) in enumerate(s.intervals):
            if lo >= hi:
                continue
            for j in target_chains.get((sym, i), ()):
                if stats is not None:
                    stats.probes += 1
                run = self._store.run(j, sym, i, lo, hi)
                if run is None:
                    continue
                rmin, rmax = run
                if mins[j] < 0 or rmin < mins[j]:
                    mins[j] = rmin
                if rmax > maxs[j]:
                    maxs[j] = rmax
        return ConvexSet(tuple(
            (mins[j], maxs[j] + 1) if mins[j] >= 0 else (0, 0) for j in range(self.q)))

    def _check_convex(self, s: ConvexSet) -> None:
        if self._order_bits is None:
            return
        ids = self.classes_in(s)
        inside = set(ids)
        bits = self._order_bits
        for u in ids:
            for v in range(self.n_classes):
                if v in inside:
                    continue
                for z in ids:
                    if bits[u, v] and bits[v, z]:
                        raise ValueError(f"starting set is not convex: {v} lies between")

    def match_from(self, u: ConvexSet, pattern: Iterable[str],
                   stats: QueryStats | None = None, validate: bool = False) -> tuple[bool, ConvexSet]:
        """Fold follow over the pattern starting at ``u`` (which must be convex)."""
        symbols = list(pattern)
        for a in symbols:
            self._symbol_id(a)
        if validate:
            self._check_convex(u)
        cur = u
        for a in symbols:
            cur = self.follow(cur, a, stats)
            if cur.is_empty():
                break
        return (not cur.is_empty(), cur)

    def match_pattern(self, pattern: Iterable[str],
                      stats: QueryStats | None = None) -> tuple[bool, ConvexSet]:
        """Match starting anywhere: fold from the full (trivially convex) set."""
        return self.match_from(self.full_set(), pattern, stats)

    def accept(self, alpha: Iterable[str], stats: QueryStats | None = None) -> bool:
        """Language membership: match from the initial class, then hit a final."""
        if self.initial_class is None or self._finals_bv is None:
            raise ValueError("index lacks automaton data (build with finals and an initial state)")
        if self.initial_class not in self.marked_classes:
            raise ValueError("index was built without marking the initial state; "
                             "acceptance queries need the marker")
        start = self.set_for_classes([self.initial_class])
        ok, end = self.match_from(start, alpha, stats)
        if not ok:
            return False
        for j, (lo, hi) in enumerate(end.intervals):
            if lo < hi and self._finals_bv[j].rank1(hi) - self._finals_bv[j].rank1(lo) > 0:
                return True
        return False

    def map_back(self, s: ConvexSet) -> frozenset[int]:
        """Union of original nodes over all classes in the set."""
        out: set[int] = set()
        for cid in self.classes_in(s):
            out.update(self.members[cid])
        return frozenset(out)

    # Accounting ---------------------------------------------------------------

    def space_report(self) -> SpaceReport:
        store = self._store
        if not isinstance(store, _CompactStore):
            store = _CompactStore(self.q, len(self.alphabet),
                                  [len(c) for c in self.chains], self._group_edges)
        breakdown = store.payload_bits()
        breakdown["boundary_bits"] = sum(b.payload_bits for b in self._boundaries)
        breakdown["final_bits"] = (
            sum(b.payload_bits for b in self._finals_bv) if self._finals_bv else 0)
        measured = sum(breakdown.values())
        breakdown["class_map_bits"] = (
            self.n_original * width_for(max(self.n_classes - 1, 0)))  # reported, not counted
        breakdown["rank_directory_bits"] = (
            sum(b.aux_bits for b in self._boundaries)
            + (sum(b.aux_bits for b in self._finals_bv) if self._finals_bv else 0))
        per_edge = ceil_log2(len(self.alphabet)) + ceil_log2(self.q) + 2
        formula = self.e_quotient * per_edge + self.n_classes
        if self._finals_bv is not None:
            formula += self.n_classes
        return SpaceReport(measured, formula, breakdown)

    # Serialization -----------------------------------------------------------

    def to_bytes(self) -> bytes:
        out = bytearray()
        flags = (_FLAG_FINALS if self.finals is not None else 0) | (
            _FLAG_INITIAL if self.initial_class is not None else 0)
        out += struct.pack("<4sHHIQIII", MAGIC, FORMAT_VERSION, flags,
                           self.n_original, self.e_original, self.n_classes, self.q,
                           len(self.alphabet))
        for sym in self.alphabet.symbols:
            raw = sym.encode("utf-8")
            out += struct.pack("<H", len(raw)) + raw
        for chain in self.chains:
            out += struct.pack("<I", len(chain))
            out += struct.pack(f"<{len(chain)}I", *chain) if chain else b""
        for group in self.members:
            out += struct.pack("<I", len(group))
            out += struct.pack(f"<{len(group)}I", *group) if group else b""
        marked = sorted(self.marked_classes)
        out += struct.pack("<I", len(marked))
        out += struct.pack(f"<{len(marked)}I", *marked) if marked else b""
        items = sorted(self._group_edges.items())
        out += struct.pack("<I", len(items))
        for (j, sym, i), edges in items:
            ts = PackedArray(width_for(max((t for t, _ in edges), default=0)) , [t for t, _ in edges])
            ss = PackedArray(width_for(max((s for _, s in edges), default=0)), [s for _, s in edges])
            tb, sb = ts.to_bytes(), ss.to_bytes()
            out += struct.pack("<IIIIBB", j, sym, i, len(edges), ts.width, ss.width)
            out += struct.pack("<I", len(tb)) + tb
            out += struct.pack("<I", len(sb)) + sb
        if self.finals is not None:
            finals = sorted(self.finals)
            out += struct.pack("<I", len(finals))
            out += struct.pack(f"<{len(finals)}I", *finals) if finals else b""
        if self.initial_class is not None:
            out += struct.pack("<I", self.initial_class)
        return bytes(out)

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def from_bytes(cls, raw: bytes, backend: str = "compact") -> "Index":
        try:
            return cls._from_bytes(raw, backend)
        except struct.error:
            raise ValueError("truncated or corrupt index file") from None

    @classmethod
    def _from_bytes(cls, raw: bytes, backend: str) -> "Index":
        view = memoryview(raw)
        off = 0

        def take(fmt: str):
            nonlocal off
            size = struct.calcsize(fmt)
            vals = struct.unpack_from(fmt, view, off)
            off += size
            return vals

        magic, version, flags, n_original, e_original, n_classes, q, sigma = take("<4sHHIQIII")
        if magic != MAGIC:
            raise ValueError("not an index file (bad magic)")
        if version != FORMAT_VERSION:
            raise ValueError(f"unsupported index format version {version}")
        symbols = []
        for _ in range(sigma):
            (ln,) = take("<H")
            symbols.append(bytes(view[off:off + ln]).decode("utf-8"))
            off += ln
        chains = []
        for _ in range(q):
            (ln,) = take("<I")
            chains.append(tuple(take(f"<{ln}I")) if ln else ())
        members = []
        for _ in range(n_classes):
            (ln,) = take("<I")
            members.append(tuple(take(f"<{ln}I")) if ln else ())
        (ln,) = take("<I")
        marked = frozenset(take(f"<{ln}I")) if ln else frozenset()
        (n_groups,) = take("<I")
        group_edges: dict[tuple[int, int, int], list[tuple[int, int]]] = {}
        for _ in range(n_groups):
            j, sym, i, count, wt, ws = take("<IIIIBB")
            (tb_len,) = take("<I")
            ts = PackedArray.from_words(wt, count, bytes(view[off:off + tb_len]))
            off += tb_len
            (sb_len,) = take("<I")
            ss = PackedArray.from_words(ws, count, bytes(view[off:off + sb_len]))
            off += sb_len
            group_edges[(j, sym, i)] = list(zip(ts, ss))
        finals = None
        if flags & _FLAG_FINALS:
            (ln,) = take("<I")
            finals = frozenset(take(f"<{ln}I")) if ln else frozenset()
        initial_class = None
        if flags & _FLAG_INITIAL:
            (initial_class,) = take("<I")
        return cls(alphabet=Alphabet(tuple(symbols)), chains=tuple(chains),
                   members=tuple(members), n_original=n_original, e_original=e_original,
                   group_edges=group_edges, finals=finals, initial_class=initial_class,
                   marked_classes=marked, backend=backend)

    @classmethod
    def load(cls, path, backend: str = "compact") -> "Index":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read(), backend=backend)


def _check_monotone_groups(group_edges: dict[tuple[int, int, int], list[tuple[int, int]]]) -> None:
    """Sources must be non-decreasing once a group is (target, source)-sorted."""
    for key, edges in group_edges.items():
        prev_s = -1
        prev_t = -1
        for t, s in edges:
            if (t, s) < (prev_t, prev_s):
                raise ValueError(f"group {key} is not sorted by (target, source)")
            if s < prev_s:
                raise ValueError(
                    f"group {key} breaks source monotonicity; inputs were not a "
                    "chain partition of a co-lex order")
            prev_t, prev_s = t, s


def build_index(qg: QuotientGraph, cp: ChainPartition,
                finals: frozenset[int] | None = None, initial: int | None = None,
                backend: str = "compact",
                n_original: int | None = None, e_original: int | None = None) -> Index:
    """Lay out the quotient graph along a chain partition of its order.

    ``finals``/``initial`` switch on automaton mode. The partition must cover
    exactly the classes of ``qg.order`` with consecutive chain members strictly
    comparable.
    """
    order = qg.order
    n_classes = qg.partition.count
    if cp.chain_count != len(cp.chains) or sorted(c for ch in cp.chains for c in ch) != list(range(n_classes)):
        raise ValueError("chain partition does not cover the quotient classes")
    for chain in cp.chains:
        for a, b in zip(chain, chain[1:]):
            if a == b or not order.holds(a, b):
                raise ValueError("chain members are not strictly increasing in the order")
    group_edges: dict[tuple[int, int, int], list[tuple[int, int]]] = {}
    for cu, cv, a in qg.graph.edges:
        key = (cp.chain_of[cv], qg.graph.alphabet.index(a), cp.chain_of[cu])
        group_edges.setdefault(key, []).append((cp.pos_in_chain[cv], cp.pos_in_chain[cu]))
    for edges in group_edges.values():
        edges.sort()
    return Index(alphabet=qg.graph.alphabet, chains=cp.chains,
                 members=qg.partition.members,
                 n_original=qg.partition.n if n_original is None else n_original,
                 e_original=len(qg.graph.edges) if e_original is None else e_original,
                 group_edges=group_edges, finals=finals, initial_class=initial,
                 marked_classes=qg.marked_classes, backend=backend,
                 order_bits=order.bits)


def build_nfa_index(qnfa: QuotientNfa, cp: ChainPartition, backend: str = "compact",
                    n_original: int | None = None, e_original: int | None = None) -> Index:
    return build_index(qnfa.quotient, cp, finals=qnfa.finals, initial=qnfa.initial,
                       backend=backend, n_original=n_original, e_original=e_original)
