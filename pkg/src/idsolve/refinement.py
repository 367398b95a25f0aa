"""Exact solver for annotated red-blue partition refinement.

Input: bipartite graph with sides R (candidates) and B, a partition Q of R∪B,
forced vertices C0 ⊆ R, demand set T_L ⊆ B and a budget. Wanted: a minimum C
with C0 ⊆ C ⊆ R, T_L ⊆ N(C) and Q ⊓ P(C) the identity partition.

The solver guesses which B vertices stay undominated (at most one per part),
which turns the demand into the exact target N(C) = T, then runs a forward
dynamic program over R∖C0 ordered part by part. The fast path keys states by
the non-singleton blocks of the B-side partition, the covered set and one bit
recording whether the current red part already has its single allowed
skipped vertex. :func:`reference_solve` keeps the full partition of R∪B as
state and serves as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator, Optional

from .errors import BudgetError, InputError
from .graph import Graph, Partition, bits, induced_partition, meet, members

GUESS_LIMIT = 1 << 20


class _Infeasible:
    __slots__ = ()

    def __repr__(self) -> str:
        return "INFEASIBLE"


INFEASIBLE = _Infeasible()


@dataclass(frozen=True)
class RefinementInstance:
    graph: Graph
    red: tuple[int, ...]
    blue: tuple[int, ...]
    q_partition: Partition
    c0: frozenset[int] = frozenset()
    t_demand: frozenset[int] = frozenset()
    budget: int = 0

    def validate(self) -> None:
        rs, bs = set(self.red), set(self.blue)
        if rs & bs:
            raise InputError("red and blue sides overlap")
        if rs | bs != set(range(self.graph.n)):
            raise InputError("red and blue sides must cover the graph")
        for u, v in self.graph.edges():
            if (u in rs) == (v in rs):
                raise InputError(f"edge ({u}, {v}) is not red-blue")
        if not set(self.c0) <= rs:
            raise InputError("forced set must lie in R")
        if not set(self.t_demand) <= bs:
            raise InputError("demand set must lie in B")
        if self.q_partition.ground != frozenset(rs | bs):
            raise InputError("Q must partition R ∪ B")


@dataclass
class PreparedInstance:
    """One guess of undominated B vertices, with all parts monochromatic.

    ``target`` is the exact set N(C) must equal. ``order`` lists r_1..r_l,
    consecutive per red part; ``part_of[i]`` is the index of r_i's part.
    """

    source: RefinementInstance
    undominated: frozenset[int]
    target: frozenset[int]
    c0: frozenset[int]
    blocked: frozenset[int]
    red_parts: tuple[tuple[int, ...], ...]
    blue_parts: Partition
    budget: int
    order: tuple[int, ...] = field(init=False)
    part_of: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        self.order = tuple(r for p in self.red_parts for r in p)
        self.part_of = tuple(j for j, p in enumerate(self.red_parts) for _ in p)

    def lower_bound(self) -> int:
        return len(self.c0) + sum(len(p) - 1 for p in self.red_parts)


def classify_parts(p0: Partition, red: Iterable[int]) -> tuple[list, list, list]:
    """Split parts into pure-red, pure-blue and mixed lists."""
    rs = set(red)
    pure_r, pure_b, mixed = [], [], []
    for b in p0.blocks:
        nr = sum(1 for v in b if v in rs)
        if nr == len(b):
            pure_r.append(b)
        elif nr == 0:
            pure_b.append(b)
        else:
            mixed.append(b)
    return pure_r, pure_b, mixed


def guess_options(inst: RefinementInstance) -> Optional[list[list[Optional[int]]]]:
    """Per-part choices for the undominated vertex; ``None`` if no guess works."""
    g = inst.graph
    rs = set(inst.red)
    c0 = set(inst.c0)
    p0 = meet(inst.q_partition, induced_partition(inst.q_partition.ground, c0, g))
    demand = set(inst.t_demand)
    for c in c0:
        demand.update(g.adj[c])
    rmask = bits(rs)
    options = []
    for block in p0.blocks:
        side = [v for v in block if v not in rs]
        if not side:
            continue
        isolated = [v for v in side if not (g.nbr_mask(v) & rmask)]
        if len(isolated) > 1 or any(v in demand for v in isolated):
            return None
        if isolated:
            options.append([isolated[0]])
        else:
            options.append([None] + [v for v in side if v not in demand])
    return options


def count_guesses(inst: RefinementInstance) -> int:
    opts = guess_options(inst)
    if opts is None:
        return 0
    total = 1
    for o in opts:
        total *= len(o)
    return total


def preprocess(inst: RefinementInstance, limit: int = GUESS_LIMIT) -> Iterator[PreparedInstance]:
    """Lazily yield one prepared instance per surviving undominated-set guess."""
    opts = guess_options(inst)
    if opts is None:
        return
    total = 1
    for o in opts:
        total *= len(o)
    if total > limit:
        raise BudgetError(f"{total} undominated-set guesses exceed the limit {limit}")
    g = inst.graph
    rs = set(inst.red)
    blue = set(inst.blue)
    c0 = frozenset(inst.c0)
    p0 = meet(inst.q_partition, induced_partition(inst.q_partition.ground, c0, g))
    for choice in product(*opts):
        und = frozenset(v for v in choice if v is not None)
        prep = _prepare(inst, g, rs, blue, c0, p0, und)
        if prep is not None:
            yield prep


def _prepare(inst, g, rs, blue, c0, p0, und) -> Optional[PreparedInstance]:
    target = frozenset(blue - und)
    umask = bits(und)
    blocked = frozenset(r for r in rs if g.nbr_mask(r) & umask)
    if blocked & c0:
        return None
    forced = set()
    red_parts = []
    for block in p0.blocks:
        rp = [v for v in block if v in rs and v not in c0]
        if not rp:
            continue
        f = [v for v in rp if v in blocked]
        if any(v in und for v in block):
            if f:
                return None
            forced.update(rp)
            continue
        if len(f) >= 2:
            return None
        if len(f) == 1:
            forced.update(v for v in rp if v != f[0])
            continue
        red_parts.append(tuple(rp))
    c0p = frozenset(c0 | forced)
    blue_parts = meet(inst.q_partition, induced_partition(inst.q_partition.ground, c0p, g)).restrict(blue)
    red_parts = [p for p in red_parts if p]
    prep = PreparedInstance(
        source=inst,
        undominated=und,
        target=target,
        c0=c0p,
        blocked=blocked,
        red_parts=tuple(red_parts),
        blue_parts=blue_parts,
        budget=inst.budget,
    )
    if prep.lower_bound() > inst.budget:
        return None
    return prep


# ---------------------------------------------------------------------------
# fast dynamic program


def solve(prep: PreparedInstance, budget: Optional[int] = None) -> Optional[tuple[int, tuple[int, ...]]]:
    """Minimum value and witness for one prepared instance, or ``None``."""
    g = prep.source.graph
    budget = prep.budget if budget is None else budget
    base = len(prep.c0)
    if base > budget:
        return None
    blue = sorted(prep.source.blue)
    pos = {b: i for i, b in enumerate(blue)}

    def bmask(vs):
        m = 0
        for v in vs:
            m |= 1 << pos[v]
        return m

    tmask = bmask(prep.target)
    order = prep.order
    ell = len(order)
    nb = [bmask(w for w in g.adj[r]) for r in order]
    s0 = 0
    for c in prep.c0:
        s0 |= bmask(w for w in g.adj[c])
    if s0 & ~tmask:
        return None
    blocks0 = tuple(sorted(bmask(b) for b in prep.blue_parts.blocks if len(b) > 1))

    # suffix data: coverage still reachable, B classes no future vertex can split
    fut_union = [0] * (ell + 1)
    fut_class = [None] * (ell + 1)
    cls = [0] * len(blue)
    fut_class[ell] = tuple(cls)
    for i in range(ell - 1, -1, -1):
        fut_union[i] = fut_union[i + 1] | nb[i]
        cls = [2 * c + ((nb[i] >> p) & 1) for p, c in enumerate(cls)]
        fut_class[i] = _relabel(cls)
    part_sizes = [len(p) for p in prep.red_parts]
    rest_after = [0] * ell  # vertices of r_i's part after position i
    fut_parts = [0] * ell  # sum(|P|-1) over parts entirely after r_i's part
    acc = 0
    for i in range(ell - 1, -1, -1):
        j = prep.part_of[i]
        last = i == ell - 1 or prep.part_of[i + 1] != j
        if last:
            if i < ell - 1:
                acc += part_sizes[prep.part_of[i + 1]] - 1
            rest_after[i] = 0
        else:
            rest_after[i] = rest_after[i + 1] + 1
        fut_parts[i] = acc

    def alive(blocks, s, flag, value, i):
        need = fut_parts[i] + max(0, rest_after[i] - (0 if flag else 1))
        if value + need > budget:
            return False
        if (tmask & ~s) & ~fut_union[i + 1]:
            return False
        fc = fut_class[i + 1]
        for b in blocks:
            seen = set()
            while b:
                low = b & -b
                c = fc[low.bit_length() - 1]
                if c in seen:
                    return False
                seen.add(c)
                b ^= low
        return True

    if not _blocks_splittable(blocks0, fut_class[0]):
        return None
    layers: list[dict] = [{(blocks0, s0, False): (base, None, False)}]
    for i in range(ell):
        new_part = i == 0 or prep.part_of[i] != prep.part_of[i - 1]
        nxt: dict = {}
        nbi = nb[i]
        for key, (value, _, _) in layers[-1].items():
            blocks, s, flag = key
            if new_part:
                flag = False
            # skip r_i
            if not flag and alive(blocks, s, True, value, i):
                _relax(nxt, (blocks, s, True), value, key, False)
            # take r_i
            v2 = value + 1
            nblocks = []
            for b in blocks:
                a, c = b & nbi, b & ~nbi
                if a & (a - 1):
                    nblocks.append(a)
                if c & (c - 1):
                    nblocks.append(c)
            nblocks = tuple(sorted(nblocks))
            ns = s | nbi
            if alive(nblocks, ns, flag, v2, i):
                _relax(nxt, (nblocks, ns, flag), v2, key, True)
        layers.append(nxt)
        if not nxt:
            return None
    best = None
    for key, (value, _, _) in layers[-1].items():
        blocks, s, _ = key
        if not blocks and s == tmask and value <= budget:
            if best is None or value < best[0]:
                best = (value, key)
    if best is None:
        return None
    chosen = set(prep.c0)
    key = best[1]
    for i in range(ell, 0, -1):
        _, prev, took = layers[i][key]
        if took:
            chosen.add(order[i - 1])
        key = prev
    witness = tuple(sorted(chosen))
    if len(witness) != best[0] or not check_solution(prep.source, witness, exact_target=prep.target):
        raise AssertionError("refinement DP produced an invalid witness")
    return best[0], witness


def _relax(table, key, value, parent, took):
    cur = table.get(key)
    if cur is None or value < cur[0] or (value == cur[0] and cur[2] and not took):
        table[key] = (value, parent, took)


def _relabel(cls):
    ids: dict[int, int] = {}
    return tuple(ids.setdefault(c, len(ids)) for c in cls)


def _blocks_splittable(blocks, fc) -> bool:
    for b in blocks:
        ms = [fc[p] for p in members(b)]
        if len(set(ms)) < len(ms):
            return False
    return True


# ---------------------------------------------------------------------------
# top level


@dataclass(frozen=True)
class RefinementResult:
    value: int
    witness: tuple[int, ...]
    undominated: frozenset[int]


def solve_instance(
    inst: RefinementInstance, mode: str = "optimize", limit: int = GUESS_LIMIT
) -> Optional[RefinementResult]:
    """Best solution over all guesses; ``mode='decide'`` stops at the first hit."""
    inst.validate()
    best: Optional[RefinementResult] = None
    for prep in preprocess(inst, limit):
        cap = inst.budget if best is None else min(inst.budget, best.value - 1)
        if prep.lower_bound() > cap:
            continue
        res = solve(prep, cap)
        if res is not None and (best is None or res[0] < best.value):
            best = RefinementResult(res[0], res[1], prep.undominated)
            if mode == "decide" or best.value == len(inst.c0):
                break
    return best


def check_solution(inst: RefinementInstance, c: Iterable[int], exact_target=None) -> bool:
    """Does ``c`` satisfy every constraint of the instance (budget included)?"""
    c = set(c)
    g = inst.graph
    if not set(inst.c0) <= c or not c <= set(inst.red) or len(c) > inst.budget:
        return False
    dom = set()
    for v in c:
        dom.update(g.adj[v])
    if not set(inst.t_demand) <= dom:
        return False
    if exact_target is not None and dom != set(exact_target):
        return False
    ground = inst.q_partition.ground
    return meet(inst.q_partition, induced_partition(ground, c, g)).is_identity()


def brute_force_refinement(inst: RefinementInstance, cap: int = 22) -> Optional[tuple[int, tuple[int, ...]]]:
    """Subset-enumeration oracle; lexicographically first minimum witness."""
    free = sorted(set(inst.red) - set(inst.c0))
    if len(free) > cap:
        raise BudgetError(f"brute force capped at {cap} free red vertices")
    base = sorted(inst.c0)
    for size in range(0, min(len(free), inst.budget - len(base)) + 1):
        for extra in combinations(free, size):
            c = tuple(sorted(base + list(extra)))
            if check_solution(inst, c):
                return len(c), c
    return None


# ---------------------------------------------------------------------------
# reference dynamic program over full partitions


@dataclass(frozen=True)
class DPState:
    index: int
    partition: Partition
    covered: frozenset[int]


def dp_step(g: Graph, state: DPState, take: bool, r: int) -> DPState:
    if not take:
        return DPState(state.index + 1, state.partition, state.covered)
    ground = state.partition.ground
    part = meet(state.partition, induced_partition(ground, {r}, g))
    return DPState(state.index + 1, part, state.covered | frozenset(g.adj[r]))


def valid_tuple(prep: PreparedInstance, state: DPState) -> bool:
    """Valid-tuple properties 1-3, checked on red parts only."""
    i = state.index
    parts = prep.red_parts
    if not parts:
        return True
    where = state.partition.block_of()
    blocks = state.partition.blocks
    cur = prep.part_of[i - 1] if i else -1
    for j in range(cur):
        if any(len(blocks[where[v]]) != 1 for v in parts[j]):
            return False
    if cur >= 0:
        done = set(prep.order[:i])
        suffix = {v for v in parts[cur] if v not in done}
        loose = [v for v in parts[cur] if v in done and len(blocks[where[v]]) != 1]
        if len(loose) > 1:
            return False
        for v in loose:
            if set(blocks[where[v]]) != {v} | suffix:
                return False
        if not loose and suffix and set(blocks[where[min(suffix)]]) != suffix:
            return False
    for j in range(cur + 1, len(parts)):
        if set(blocks[where[parts[j][0]]]) != set(parts[j]):
            return False
    return True


@dataclass(frozen=True)
class DPEntry:
    value: object  # int or INFEASIBLE
    parent: Optional[tuple] = None  # (previous key, took r_i)


def _reference_start(prep: PreparedInstance) -> Partition:
    g = prep.source.graph
    ground = prep.source.q_partition.ground
    rs = set(prep.source.red)
    p0 = meet(prep.source.q_partition, induced_partition(ground, prep.c0, g))
    # mixed parts split into their red and blue sides
    return Partition.of(
        side for b in p0.blocks for side in ([v for v in b if v in rs], [v for v in b if v not in rs])
    )


def reference_solve(prep: PreparedInstance) -> Optional[tuple[int, tuple[int, ...]]]:
    """Literal DP keyed by (partition of R∪B, covered set); slow but transparent."""
    g = prep.source.graph
    p0 = _reference_start(prep)
    s0 = frozenset(w for c in prep.c0 for w in g.adj[c])
    if not s0 <= prep.target:
        return None
    layers = [{(p0, s0): DPEntry(len(prep.c0))}]
    for i, r in enumerate(prep.order):
        nxt: dict = {}
        for key, entry in layers[-1].items():
            st = DPState(i, key[0], key[1])
            for take in (False, True):
                if take and r in prep.blocked:
                    continue
                ns = dp_step(g, st, take, r)
                if not ns.covered <= prep.target or not valid_tuple(prep, ns):
                    continue
                val = entry.value + take
                nkey = (ns.partition, ns.covered)
                old = nxt.get(nkey, DPEntry(INFEASIBLE))
                if old.value is INFEASIBLE or val < old.value:
                    nxt[nkey] = DPEntry(val, (key, take))
        layers.append(nxt)
    best = None
    for key, entry in layers[-1].items():
        part, cov = key
        if part.is_identity() and cov == prep.target and entry.value <= prep.budget:
            if best is None or entry.value < best[0]:
                best = (entry.value, key)
    if best is None:
        return None
    chosen = set(prep.c0)
    key = best[1]
    for i in range(len(prep.order), 0, -1):
        prev, took = layers[i][key].parent
        if took:
            chosen.add(prep.order[i - 1])
        key = prev
    return best[0], tuple(sorted(chosen))


def reference_solve_instance(inst: RefinementInstance) -> Optional[tuple[int, tuple[int, ...]]]:
    best = None
    for prep in preprocess(inst):
        res = reference_solve(prep)
        if res is not None and (best is None or res[0] < best[0]):
            best = res
    return best


def state_count_pairs(prep: PreparedInstance) -> int:
    """Distinct (B-side partition, covered) pairs reached by the reference DP."""
    g = prep.source.graph
    blue = set(prep.source.blue)
    p0 = _reference_start(prep)
    s0 = frozenset(w for c in prep.c0 for w in g.adj[c])
    layer = {(p0, s0)}
    seen = {(p0.restrict(blue), s0)}
    for i, r in enumerate(prep.order):
        nxt = set()
        for part, cov in layer:
            for take in (False, True):
                if take and r in prep.blocked:
                    continue
                ns = dp_step(g, DPState(i, part, cov), take, r)
                if ns.covered <= prep.target and valid_tuple(prep, ns):
                    nxt.add((ns.partition, ns.covered))
        layer = nxt
        seen.update((p.restrict(blue), c) for p, c in layer)
    return len(seen)


__all__ = [
    "DPEntry",
    "DPState",
    "GUESS_LIMIT",
    "INFEASIBLE",
    "PreparedInstance",
    "RefinementInstance",
    "RefinementResult",
    "brute_force_refinement",
    "check_solution",
    "classify_parts",
    "count_guesses",
    "dp_step",
    "preprocess",
    "reference_solve",
    "reference_solve_instance",
    "solve",
    "solve_instance",
    "valid_tuple",
]
