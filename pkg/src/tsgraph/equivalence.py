"""Markov equivalence, class enumeration under background knowledge, and DPAGs.

Equivalence classes are enumerated exactly: every retyping of the skeleton is
tried (with pruning) and kept if it is a DMAG, Markov equivalent to the input
and consistent with the background knowledge. Every knowledge other than
``NONE`` implies repeating orientations, so under those the unit of choice is
a whole translation class of edges sharing one type.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from itertools import combinations, product

from .canonical import canonical_ts_dag, is_stat_ts_dmag, is_ts_dmag
from .errors import BudgetExceeded, GraphError, InvariantViolation
from .graph import (
    CIRCLE,
    HEAD,
    TAIL,
    GraphKind,
    Vertex,
    WindowGraph,
    validate_dmag,
)
from .marginal import ts_dmag
from .properties import Property, check_property, is_time_ordered, stationarify
from .separation import TsDagOracle

DEFAULT_BUDGET = 12


class Knowledge(enum.Enum):
    NONE = "none"
    B_TO = "b_to"
    B_TA = "b_ta"
    B_D = "b_d"
    B_D_STAT = "b_d_stat"

    @classmethod
    def parse(cls, value) -> "Knowledge":
        if isinstance(value, cls):
            return value
        if value is None:
            return cls.NONE
        try:
            return cls(str(value).lower())
        except ValueError:
            raise GraphError(f"unknown background knowledge {value!r}") from None


def default_budget() -> int:
    env = os.environ.get("TSGRAPH_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise GraphError(f"TSGRAPH_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


# -- Markov equivalence ----------------------------------------------------


def _is_collider(g, a, b, c):
    return g.marks(a, b)[1] is HEAD and g.marks(c, b)[1] is HEAD


def unshielded_triples(g: WindowGraph):
    """``(a, b, c)`` with ``a - b - c`` and ``a``, ``c`` non-adjacent (``a`` before ``c``)."""
    out = []
    for b in g.vertices:
        nbrs = sorted((w for w, _, _ in g.neighbors(b)), key=lambda v: (v.time, v.var))
        for a, c in combinations(nbrs, 2):
            if not g.adjacent(a, c):
                out.append((a, b, c))
    return out


def discriminating_paths(g: WindowGraph):
    """All discriminating paths ``(x, q1, ..., qk, v, y)`` of a DMAG.

    Every ``qi`` is a collider on the path and a parent of ``y``; ``x`` and
    ``y`` are non-adjacent; the path has at least three edges.
    """
    out = []
    for y in g.vertices:
        parents_y = set(g.parents(y))
        for v, _, _ in g.neighbors(y):
            for qk, m_v, m_qk in g.neighbors(v):
                if qk == y or qk not in parents_y or m_qk is not HEAD:
                    continue
                stack = [[qk]]
                while stack:
                    chain = stack.pop()
                    q = chain[0]
                    for z, m_q, m_z in g.neighbors(q):
                        if z in (v, y) or z in chain or m_q is not HEAD:
                            continue
                        if not g.adjacent(z, y):
                            out.append(tuple([z] + chain + [v, y]))
                        elif z in parents_y and m_z is HEAD:
                            stack.append([z] + chain)
    return out


def _is_discriminating(g: WindowGraph, path) -> bool:
    x, *qs, v, y = path
    if g.adjacent(x, y):
        return False
    seq = [x] + qs + [v]
    for k in range(len(seq) - 1):
        if not g.adjacent(seq[k], seq[k + 1]):
            return False
    parents_y = set(g.parents(y))
    for k, q in enumerate(qs, start=1):
        if q not in parents_y:
            return False
        if g.marks(seq[k - 1], q)[1] is not HEAD or g.marks(seq[k + 1], q)[1] is not HEAD:
            return False
    return g.adjacent(v, y)


class EquivalenceChecker:
    """Precomputed Markov-equivalence test against a fixed reference DMAG."""

    def __init__(self, ref: WindowGraph):
        self.ref = ref
        self.skeleton = ref.skeleton()
        self.triples = [(t, _is_collider(ref, *t)) for t in unshielded_triples(ref)]
        self.paths = [(p, _is_collider(ref, p[-3], p[-2], p[-1])) for p in discriminating_paths(ref)]

    def __call__(self, g: WindowGraph) -> bool:
        if g.n_vars != self.ref.n_vars or g.times != self.ref.times:
            raise GraphError("graphs must share their vertex set")
        if g.skeleton() != self.skeleton:
            return False
        for t, col in self.triples:
            if _is_collider(g, *t) != col:
                return False
        for p, col in self.paths:
            if _is_discriminating(g, p) and _is_collider(g, p[-3], p[-2], p[-1]) != col:
                return False
        return True


def _require_dmag(g, label="graph"):
    if g.has_circles():
        raise GraphError(f"{label} has circle marks")
    report = validate_dmag(g)
    if not report.valid:
        raise GraphError(f"{label} is not a DMAG: {report.violations[0]}")


def markov_equivalent(m1: WindowGraph, m2: WindowGraph) -> bool:
    """Skeleton, unshielded colliders and shared discriminating paths agree."""
    if m1.n_vars != m2.n_vars or m1.times != m2.times:
        raise GraphError("graphs must share their vertex set")
    _require_dmag(m1, "first graph")
    _require_dmag(m2, "second graph")
    return EquivalenceChecker(m1)(m2)


# -- background knowledge ----------------------------------------------------


def satisfies(g: WindowGraph, bk) -> bool:
    """Whether a DMAG is consistent with background knowledge ``bk``."""
    bk = Knowledge.parse(bk)
    if bk is Knowledge.NONE:
        return True
    if not is_time_ordered(g):
        return False
    if bk is Knowledge.B_TO:
        return check_property(g, Property.REPEATING_ORIENTATIONS)
    if not check_property(g, Property.REPEATING_ANCESTRAL):
        return False
    if bk is Knowledge.B_TA:
        return True
    if bk is Knowledge.B_D:
        return is_ts_dmag(g, mode="mixed").verdict
    return check_property(g, Property.REPEATING_EDGES) and is_stat_ts_dmag(g)


_DIRECTED = (TAIL, HEAD)
_REVERSED = (HEAD, TAIL)
_BIDIRECTED = (HEAD, HEAD)


def _units(m: WindowGraph, bk: Knowledge):
    pairs = list(m.edges)
    if bk is Knowledge.NONE:
        return [([pair], [_DIRECTED, _REVERSED, _BIDIRECTED]) for pair in pairs]
    groups = {}
    for a, b in pairs:
        groups.setdefault((a.var, b.var, b.time - a.time), []).append((a, b))
    units = []
    for (_, _, dt), members in groups.items():
        options = [_DIRECTED, _BIDIRECTED] if dt > 0 else [_DIRECTED, _REVERSED, _BIDIRECTED]
        units.append((members, options))
    units.sort(key=lambda u: (u[0][0][1].time - u[0][0][0].time, u[0][0][0].var, u[0][0][1].var))
    return units


def _reaches(succ, src, dst):
    stack = [src]
    seen = {src}
    while stack:
        v = stack.pop()
        if v == dst:
            return True
        for w in succ.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def _search(m: WindowGraph, bk: Knowledge, units):
    """Backtracking over unit types, pruned by unshielded colliders and cycles."""
    checker = EquivalenceChecker(m)
    pair_unit = {}
    for k, (members, _) in enumerate(units):
        for pair in members:
            pair_unit[pair] = k
    # unshielded triple constraints become checkable once both edges are set
    constraints = {}
    for (a, b, c), col in checker.triples:
        p1 = (a, b) if (a, b) in pair_unit else (b, a)
        p2 = (c, b) if (c, b) in pair_unit else (b, c)
        last = max(pair_unit[p1], pair_unit[p2])
        constraints.setdefault(last, []).append((b, p1, p2, col))

    marks = {}
    succ = {}
    results = []

    def mark_at(pair, v):
        ma, mb = marks[pair]
        return ma if v == pair[0] else mb

    def consistent(k):
        for b, p1, p2, col in constraints.get(k, ()):
            if (mark_at(p1, b) is HEAD and mark_at(p2, b) is HEAD) != col:
                return False
        return True

    def recurse(k):
        if k == len(units):
            g = WindowGraph(m.n_vars, m.times, dict(marks), kind=GraphKind.DMAG, names=m.names)
            if validate_dmag(g).valid and checker(g) and satisfies(g, bk):
                results.append(g)
            return
        members, options = units[k]
        for opt in options:
            added = []
            ok = True
            for a, b in members:
                marks[(a, b)] = opt
                if opt == _DIRECTED:
                    src, dst = a, b
                elif opt == _REVERSED:
                    src, dst = b, a
                else:
                    continue
                if _reaches(succ, dst, src):
                    ok = False
                succ.setdefault(src, []).append(dst)
                added.append(src)
            if ok and consistent(k):
                recurse(k + 1)
            for src in added:
                succ[src].pop()
            for pair in members:
                del marks[pair]

    recurse(0)
    return results


def _blocks(units):
    """Group units whose edges touch a common vertex, transitively."""
    parent = {}

    def find(v):
        while parent.setdefault(v, v) != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for members, _ in units:
        first = find(members[0][0])
        for a, b in members:
            for v in (a, b):
                root = find(v)
                if root != first:
                    parent[root] = first
    groups = {}
    for unit in units:
        groups.setdefault(find(unit[0][0][0]), []).append(unit)
    return list(groups.values())


def _class_blocks(m: WindowGraph, bk: Knowledge, budget):
    """Per-block classes ``[(sub_graph, members), ...]`` whose product is the class.

    Without knowledge, or with time order and repeating orientations only,
    every constraint lives inside one block of edges linked by shared
    vertices or shared translation classes, so blocks are enumerated
    separately. Stronger knowledge is checked on the whole graph.
    """
    budget = default_budget() if budget is None else int(budget)
    _require_dmag(m)
    if not satisfies(m, bk):
        raise GraphError(f"input graph is not consistent with background knowledge {bk.value}")
    units = _units(m, bk)
    if len(units) > budget:
        estimate = math.prod(len(opts) for _, opts in units)
        raise BudgetExceeded(len(units), budget, estimate)
    if bk not in (Knowledge.NONE, Knowledge.B_TO) or not units:
        return [(m, _search(m, bk, units))]
    out = []
    for block in _blocks(units):
        pairs = [pair for members, _ in block for pair in members]
        sub = m.replace(edges={pair: m.edges[pair] for pair in pairs})
        out.append((sub, _search(sub, bk, block)))
    return out


def _merge(reference: WindowGraph, parts):
    edges = {}
    for g in parts:
        edges.update(g.edges)
    return WindowGraph(reference.n_vars, reference.times, edges, kind=GraphKind.DMAG, names=reference.names)


def enumerate_class(m: WindowGraph, bk=Knowledge.NONE, budget=None):
    """All DMAGs Markov equivalent to ``m`` and consistent with ``bk``.

    Parameters
    ----------
    m : WindowGraph
        A valid DMAG that itself satisfies ``bk``.
    bk : Knowledge or str
    budget : int, optional
        Largest number of free orientation units (edges, or translation
        classes of edges) allowed. Defaults to ``TSGRAPH_BUDGET`` or 12.

    Returns
    -------
    tuple of WindowGraph
        Sorted canonically; always contains ``m``.
    """
    bk = Knowledge.parse(bk)
    blocks = _class_blocks(m, bk, budget)
    if len(blocks) == 1:
        results = list(blocks[0][1])
    else:
        results = [_merge(m, combo) for combo in product(*(members for _, members in blocks))]
    results.sort(key=_graph_key)
    if m not in results:
        raise InvariantViolation("enumerated class does not contain the input graph")
    return tuple(results)


def _graph_key(g: WindowGraph):
    return tuple((a, b, ma.value, mb.value) for (a, b), (ma, mb) in g.edges.items())


# -- DPAGs -------------------------------------------------------------------


@dataclass(frozen=True)
class DpagReport:
    """Maximally informative DPAG of a class, plus the class it summarizes.

    The class is kept as independent blocks; :attr:`members` expands their
    product on demand, which can be large.
    """

    dpag: WindowGraph
    class_size: int
    knowledge: Knowledge
    blocks: tuple = ()
    reference: WindowGraph = None

    @property
    def members(self):
        if len(self.blocks) == 1:
            return tuple(self.blocks[0])
        merged = [_merge(self.reference, combo) for combo in product(*self.blocks)]
        return tuple(sorted(merged, key=_graph_key))


def summarize(members, reference: WindowGraph) -> WindowGraph:
    """Keep marks shared by all members; replace the rest by circles."""
    edges = {}
    for pair in reference.edges:
        seen_a = {g.edges[pair][0] for g in members}
        seen_b = {g.edges[pair][1] for g in members}
        ma = seen_a.pop() if len(seen_a) == 1 else CIRCLE
        mb = seen_b.pop() if len(seen_b) == 1 else CIRCLE
        edges[pair] = (ma, mb)
    return WindowGraph(reference.n_vars, reference.times, edges, kind=GraphKind.DPAG, names=reference.names)


def mi_dpag(m: WindowGraph, bk=Knowledge.NONE, budget=None) -> DpagReport:
    """Maximally informative DPAG of ``m`` given background knowledge ``bk``."""
    bk = Knowledge.parse(bk)
    blocks = _class_blocks(m, bk, budget)
    edges = {}
    size = 1
    for sub, members in blocks:
        if sub not in members:
            raise InvariantViolation("enumerated class does not contain the input graph")
        edges.update(summarize(members, sub).edges)
        size *= len(members)
    dpag = WindowGraph(m.n_vars, m.times, edges, kind=GraphKind.DPAG, names=m.names)
    return DpagReport(dpag, size, bk, tuple(tuple(members) for _, members in blocks), m)


def ts_dpag(template, scheme, budget=None) -> DpagReport:
    """ts-DPAG: the m.i. DPAG of the ts-DMAG under the knowledge of an underlying ts-DAG."""
    return mi_dpag(ts_dmag(template, scheme), Knowledge.B_D, budget)


def mark_set(p: WindowGraph):
    """Non-circle marks as ``(vertex, other_end, mark)`` triples."""
    out = set()
    for (a, b), (ma, mb) in p.edges.items():
        if ma is not CIRCLE:
            out.add((a, b, ma))
        if mb is not CIRCLE:
            out.add((b, a, mb))
    return out


def circle_set(p: WindowGraph):
    out = set()
    for (a, b), (ma, mb) in p.edges.items():
        if ma is CIRCLE:
            out.add((a, b))
        if mb is CIRCLE:
            out.add((b, a))
    return out


class Informativeness(enum.Enum):
    MORE = "MoreInformative"
    LESS = "LessInformative"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


def compare_informativeness(p1: WindowGraph, p2: WindowGraph) -> Informativeness:
    """Relate two DPAGs on one skeleton by circle containment.

    ``MORE`` means every circle of ``p1`` is a circle of ``p2``, ``p2`` has
    strictly more circles, and both agree on the marks ``p1`` leaves open.
    """
    if p1.n_vars != p2.n_vars or p1.times != p2.times or p1.skeleton() != p2.skeleton():
        raise GraphError("DPAGs must share their skeleton")
    if p1 == p2:
        return Informativeness.EQUAL
    c1, c2 = circle_set(p1), circle_set(p2)
    m1, m2 = mark_set(p1), mark_set(p2)
    if c1 < c2 and m2 <= m1:
        return Informativeness.MORE
    if c2 < c1 and m1 <= m2:
        return Informativeness.LESS
    return Informativeness.INCOMPARABLE


_THEOREM3_PAIRS = {
    ("b_to", "b_to"): (Knowledge.B_TO, Knowledge.B_TO),
    ("b_ta", "b_ta"): (Knowledge.B_TA, Knowledge.B_TA),
    ("b_d", "b_d_stat"): (Knowledge.B_D, Knowledge.B_D_STAT),
}


@dataclass(frozen=True)
class Theorem3Report:
    """Comparison of the DPAG of a ts-DMAG with the DPAG of its stationarification.

    ``violations`` lists stat-side non-circle marks missing on the plain side.
    ``strict`` is True when the plain side has a non-circle mark on a shared
    adjacency where the stat side has a circle.
    """

    plain: DpagReport
    stat: DpagReport
    violations: tuple
    strict: bool

    @property
    def holds(self) -> bool:
        return not self.violations


def theorem3_check(template, scheme, pair=("b_to", "b_to"), budget=None) -> Theorem3Report:
    key = tuple(Knowledge.parse(k).value for k in pair)
    if key not in _THEOREM3_PAIRS:
        raise GraphError(f"unsupported knowledge pair {pair!r}")
    bk_plain, bk_stat = _THEOREM3_PAIRS[key]
    m = ts_dmag(template, scheme)
    plain = mi_dpag(m, bk_plain, budget)
    stat = mi_dpag(stationarify(m), bk_stat, budget)
    plain_marks = mark_set(plain.dpag)
    stat_marks = mark_set(stat.dpag)
    violations = tuple(sorted(stat_marks - plain_marks, key=str))
    stat_circles = circle_set(stat.dpag)
    strict = any((v, w) in stat_circles for v, w, _ in plain_marks)
    return Theorem3Report(plain, stat, violations, strict)


def circle_witnesses(template, scheme, budget=None, report: DpagReport = None):
    """For every circle of the ts-DPAG, two generating ts-DAGs that disagree on it.

    Returns
    -------
    dict
        ``{(v, w): (D_tail, D_head)}`` where the circle sits at ``v`` on the
        edge ``v - w``; ``D_tail`` makes ``v`` an ancestor of ``w`` and
        ``D_head`` does not.
    """
    if report is None:
        report = ts_dpag(template, scheme, budget)
    out = {}
    for v, w in sorted(circle_set(report.dpag), key=lambda e: (e[0].time, e[0].var, e[1].time, e[1].var)):
        tail_member = next(g for g in report.members if g.marks(v, w)[0] is TAIL)
        head_member = next(g for g in report.members if g.marks(v, w)[0] is HEAD)
        d_tail = canonical_ts_dag(tail_member)
        d_head = canonical_ts_dag(head_member)
        if not TsDagOracle(d_tail).is_ancestor(v, w) or TsDagOracle(d_head).is_ancestor(v, w):
            raise InvariantViolation(f"witness templates do not disagree on the mark at {v} on {v}-{w}")
        out[(Vertex(*v), Vertex(*w))] = (d_tail, d_head)
    return out
