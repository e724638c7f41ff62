"""Finite fields GF(2^m) and linear multicast codes on the residual graph.

The shared messages are h0 field symbols injected at the source. Every coded
edge carries a linear combination of its tail's incoming symbols; the global
vector of an edge expresses its symbol directly in terms of the messages.
Codes are drawn at random and kept only if both terminals' transfer matrices
are invertible, retrying with a larger field when needed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import (
    CodeConstructionError,
    CyclicSupportError,
    InfeasibleResidualError,
    InputError,
    InvariantError,
)
from .flow import decompose_paths, max_flow
from .netgraph import EdgeId, Network, NodeId

# One irreducible polynomial per field size (top bit included). The degree-8
# entry is fixed to x^8+x^4+x^3+x^2+1 so serialized plans are reproducible.
DEFAULT_MODULI: dict[int, int] = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}

MAX_FIELD_BITS = 16


def _poly_mod(a: int, m: int) -> int:
    shift = a.bit_length() - m.bit_length()
    while shift >= 0:
        a ^= m << shift
        shift = a.bit_length() - m.bit_length()
    return a


def _is_irreducible(poly: int) -> bool:
    degree = poly.bit_length() - 1
    if degree < 1:
        return False
    for d in range(1, degree // 2 + 1):
        for low in range(1 << d):
            divisor = (1 << d) | low
            if _poly_mod(poly, divisor) == 0:
                return False
    return True


class GF:
    """Arithmetic in GF(2^bits) modulo a fixed irreducible polynomial.

    Elements are plain ints in [0, 2^bits). Addition is XOR. Multiplication
    uses log/antilog tables when a primitive generator is found (always, for
    the default moduli), falling back to shift-and-reduce otherwise.
    """

    def __init__(self, bits: int, modulus: int | None = None):
        if not 1 <= bits <= MAX_FIELD_BITS:
            raise InputError(f"field bits must be in 1..{MAX_FIELD_BITS}, got {bits}")
        if modulus is None:
            modulus = DEFAULT_MODULI[bits]
        if modulus.bit_length() != bits + 1:
            raise InputError(f"modulus 0x{modulus:X} does not have degree {bits}")
        if not _is_irreducible(modulus):
            raise InputError(f"modulus 0x{modulus:X} is reducible")
        self.bits = bits
        self.modulus = modulus
        self.size = 1 << bits
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._build_tables()

    def _mul_raw(self, a: int, b: int) -> int:
        res = 0
        top = self.size
        while b:
            if b & 1:
                res ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= self.modulus
        return res

    def _build_tables(self) -> None:
        if self.bits > 12:
            return  # keep memory modest; shift-and-reduce is fine here
        for g in range(2, self.size) if self.size > 2 else [1]:
            exp = [1] * (self.size - 1)
            x = 1
            ok = True
            for i in range(1, self.size - 1):
                x = self._mul_raw(x, g)
                if x == 1:
                    ok = False
                    break
                exp[i] = x
            if ok:
                log = [0] * self.size
                for i, v in enumerate(exp):
                    log[v] = i
                self._exp = exp
                self._log = log
                return

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None and self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.size - 1)]
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        if self._exp is not None and self._log is not None:
            return self._exp[(self.size - 1 - self._log[a]) % (self.size - 1)]
        result = 1
        exponent = self.size - 2
        base = a
        while exponent:
            if exponent & 1:
                result = self._mul_raw(result, base)
            base = self._mul_raw(base, base)
            exponent >>= 1
        return result

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        acc = 0
        for a, b in zip(u, v):
            acc ^= self.mul(a, b)
        return acc

    def vec_add(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        return tuple(a ^ b for a, b in zip(u, v))

    def vec_scale(self, c: int, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.mul(c, a) for a in v)

    def mat_mul(self, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
        cols = list(zip(*b)) if b else []
        return [[self.dot(row, col) for col in cols] for row in a]

    def mat_vec(self, a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
        return [self.dot(row, v) for row in a]

    def mat_inv(self, a: Sequence[Sequence[int]]) -> list[list[int]] | None:
        """Gauss-Jordan inverse, or None if the matrix is singular."""
        n = len(a)
        work = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r][col]), None)
            if pivot is None:
                return None
            work[col], work[pivot] = work[pivot], work[col]
            scale = self.inv(work[col][col])
            work[col] = [self.mul(scale, x) for x in work[col]]
            for r in range(n):
                if r != col and work[r][col]:
                    factor = work[r][col]
                    work[r] = [
                        x ^ self.mul(factor, y) for x, y in zip(work[r], work[col])
                    ]
        return [row[n:] for row in work]

    def rank(self, a: Sequence[Sequence[int]]) -> int:
        rows = [list(r) for r in a]
        rank = 0
        n_cols = len(rows[0]) if rows else 0
        for col in range(n_cols):
            pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            scale = self.inv(rows[rank][col])
            rows[rank] = [self.mul(scale, x) for x in rows[rank]]
            for r in range(len(rows)):
                if r != rank and rows[r][col]:
                    factor = rows[r][col]
                    rows[r] = [x ^ self.mul(factor, y) for x, y in zip(rows[r], rows[rank])]
            rank += 1
        return rank


@lru_cache(maxsize=None)
def get_field(bits: int, modulus: int | None = None) -> GF:
    return GF(bits, modulus)


def gf_add(a: int, b: int) -> int:
    """Field addition (characteristic 2: bitwise XOR, any GF(2^m))."""
    return a ^ b


def gf_mul(a: int, b: int, field: GF | None = None) -> int:
    """Field multiplication; defaults to GF(2^8) mod 0x11D."""
    return (field or get_field(8)).mul(a, b)


def gf_inv(a: int, field: GF | None = None) -> int:
    """Multiplicative inverse; defaults to GF(2^8) mod 0x11D."""
    return (field or get_field(8)).inv(a)


# A coded edge's inputs are either coded in-edges of its tail ("edge", eid)
# or, at the source, message indices ("msg", i).
InputKey = tuple[str, int]


@dataclass(frozen=True)
class MulticastCode:
    """A rate-h0 linear code delivering the same h0 symbols to both terminals."""

    field_bits: int
    modulus: int
    h0: int
    support: tuple[EdgeId, ...]  # coded edges in evaluation order
    local_coeffs: dict[EdgeId, dict[InputKey, int]]
    global_vectors: dict[EdgeId, tuple[int, ...]]
    inputs_t1: tuple[EdgeId, ...]
    inputs_t2: tuple[EdgeId, ...]
    decode_t1: tuple[tuple[int, ...], ...]
    decode_t2: tuple[tuple[int, ...], ...]

    @property
    def field(self) -> GF:
        return get_field(self.field_bits, self.modulus)

    def transfer_matrix(self, terminal_inputs: Sequence[EdgeId]) -> list[list[int]]:
        return [list(self.global_vectors[eid]) for eid in terminal_inputs]


def _empty_code(field_bits: int, modulus: int) -> MulticastCode:
    return MulticastCode(
        field_bits=field_bits,
        modulus=modulus,
        h0=0,
        support=(),
        local_coeffs={},
        global_vectors={},
        inputs_t1=(),
        inputs_t2=(),
        decode_t1=(),
        decode_t2=(),
    )


def _topological_edge_order(
    net: Network, support: set[EdgeId]
) -> tuple[list[EdgeId], dict[NodeId, list[EdgeId]]]:
    """Order support edges so each comes after every support in-edge of its tail."""
    in_support: dict[NodeId, list[EdgeId]] = {}
    out_support: dict[NodeId, list[EdgeId]] = {}
    nodes: set[NodeId] = set()
    for eid in support:
        e = net.edge(eid)
        in_support.setdefault(e.head, []).append(eid)
        out_support.setdefault(e.tail, []).append(eid)
        nodes.add(e.head)
        nodes.add(e.tail)
    for lst in in_support.values():
        lst.sort()
    for lst in out_support.values():
        lst.sort()

    indegree = {v: len(in_support.get(v, [])) for v in nodes}
    ready = sorted(v for v in nodes if indegree[v] == 0)
    topo_nodes: list[NodeId] = []
    while ready:
        v = ready.pop(0)
        topo_nodes.append(v)
        for eid in out_support.get(v, []):
            w = net.edge(eid).head
            indegree[w] -= 1
            if indegree[w] == 0:
                # Insertion keeps the ready list sorted for determinism.
                lo = 0
                while lo < len(ready) and ready[lo] < w:
                    lo += 1
                ready.insert(lo, w)
    if len(topo_nodes) != len(nodes):
        raise CyclicSupportError("the coded subgraph contains a directed cycle")
    pos = {v: i for i, v in enumerate(topo_nodes)}
    ordered = sorted(support, key=lambda eid: (pos[net.edge(eid).tail], eid))
    return ordered, in_support


def build_multicast_code(
    net: Network,
    h0: int,
    *,
    rng: random.Random,
    field_bits: int = 8,
    modulus: int | None = None,
    attempts_per_field: int = 32,
) -> MulticastCode:
    """Construct a random linear multicast code of rate h0 on net.

    The coded support is the union of h0 edge-disjoint paths to each terminal
    (chosen deterministically); local coefficients are drawn from rng and the
    draw is repeated, doubling the field size after attempts_per_field
    failures, until both terminals' transfer matrices have rank h0.
    """
    bits = field_bits
    if modulus is None and bits not in DEFAULT_MODULI:
        raise InputError(f"no default modulus for GF(2^{bits})")
    if h0 == 0:
        field = get_field(bits, modulus)
        return _empty_code(field.bits, field.modulus)

    t1, t2 = net.terminals
    s = net.source
    flow1 = max_flow(net, s, {t1})
    flow2 = max_flow(net, s, {t2})
    if flow1.value < h0 or flow2.value < h0:
        raise InfeasibleResidualError(
            f"residual supports flows {flow1.value}/{flow2.value} to the terminals, need {h0}"
        )
    paths1 = decompose_paths(net, flow1, s, t1)[:h0]
    paths2 = decompose_paths(net, flow2, s, t2)[:h0]
    support = {eid for p in paths1 for eid in p.edges} | {
        eid for p in paths2 for eid in p.edges
    }
    inputs_t1 = tuple(p.edges[-1] for p in paths1)
    inputs_t2 = tuple(p.edges[-1] for p in paths2)

    ordered, in_support = _topological_edge_order(net, support)

    input_keys: dict[EdgeId, list[InputKey]] = {}
    for eid in ordered:
        tail = net.edge(eid).tail
        if tail == s:
            input_keys[eid] = [("msg", i) for i in range(h0)]
        else:
            feeders = in_support.get(tail, [])
            if not feeders:
                raise InvariantError(f"coded edge {eid} has no inputs at {tail!r}")
            input_keys[eid] = [("edge", j) for j in feeders]

    while True:
        field = get_field(bits, modulus)
        for _ in range(attempts_per_field):
            local: dict[EdgeId, dict[InputKey, int]] = {}
            global_vectors: dict[EdgeId, tuple[int, ...]] = {}
            units = [tuple(int(i == j) for j in range(h0)) for i in range(h0)]
            for eid in ordered:
                keys = input_keys[eid]
                if len(keys) == 1:
                    # A zero scalar on a single-input edge can never help rank.
                    coeffs = {keys[0]: rng.randrange(1, field.size)}
                else:
                    coeffs = {key: rng.randrange(field.size) for key in keys}
                local[eid] = coeffs
                vec = (0,) * h0
                for key, c in coeffs.items():
                    src_vec = units[key[1]] if key[0] == "msg" else global_vectors[key[1]]
                    vec = field.vec_add(vec, field.vec_scale(c, src_vec))
                global_vectors[eid] = vec
            m1 = [list(global_vectors[eid]) for eid in inputs_t1]
            m2 = [list(global_vectors[eid]) for eid in inputs_t2]
            d1 = field.mat_inv(m1)
            if d1 is None:
                continue
            d2 = field.mat_inv(m2)
            if d2 is None:
                continue
            return MulticastCode(
                field_bits=field.bits,
                modulus=field.modulus,
                h0=h0,
                support=tuple(ordered),
                local_coeffs=local,
                global_vectors=global_vectors,
                inputs_t1=inputs_t1,
                inputs_t2=inputs_t2,
                decode_t1=tuple(tuple(row) for row in d1),
                decode_t2=tuple(tuple(row) for row in d2),
            )
        if bits >= MAX_FIELD_BITS:
            raise CodeConstructionError(
                f"no full-rank code found up to GF(2^{bits}) "
                f"({attempts_per_field} attempts per field)"
            )
        # Escalate by doubling, staying within the GF(2^4)..GF(2^16) ladder.
        bits = min(max(2 * bits, 4), MAX_FIELD_BITS)
        modulus = None  # past the first ladder step, use the default modulus


def apply_code(
    code: MulticastCode, x0: Sequence[int], net: Network
) -> dict[EdgeId, int]:
    """Forward-evaluate the code: the symbol carried by every coded edge.

    Each edge applies its local coefficients to its tail's incoming symbols
    (messages themselves at the source), so the result doubles as a check that
    the global vectors are consistent with local combination.
    """
    if len(x0) != code.h0:
        raise InputError(f"expected {code.h0} message symbols, got {len(x0)}")
    field = code.field
    symbols: dict[EdgeId, int] = {}
    for eid in code.support:
        acc = 0
        for key, c in code.local_coeffs[eid].items():
            value = x0[key[1]] if key[0] == "msg" else symbols[key[1]]
            acc ^= field.mul(c, value)
        symbols[eid] = acc
    return symbols


def decode_symbols(
    code: MulticastCode, terminal: int, symbols: dict[EdgeId, int]
) -> list[int]:
    """Recover the h0 messages at terminal 1 or 2 from coded edge symbols."""
    if terminal not in (1, 2):
        raise InputError("terminal must be 1 or 2")
    inputs = code.inputs_t1 if terminal == 1 else code.inputs_t2
    matrix = code.decode_t1 if terminal == 1 else code.decode_t2
    received = [symbols[eid] for eid in inputs]
    return code.field.mat_vec(matrix, received)
