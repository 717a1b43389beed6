"""Labeled-tree expansions of numbers: evaluation, settling, descriptions.

Nodes carry one of: a nonzero rational, the symbol w, a finite sum, a binary
product, a power +-1, L_b / E_a (one node per hyperlog/hyperexp step, the
subscript an ordinal), a value placeholder awaiting expansion, or a nested
stub standing for an infinite path.  The trees 1 and w collapse to single
leaves; every other monomial gets the full unsimplified shape
``x(exp(?psi), pow_iota(L_beta(g)))`` with g = w or E_alpha(?u).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import Budget, StuckError, UndecidedError, ensure_budget
from . import expansion as xp
from . import expr as ex
from . import ordinal as ords
from .expr import Monomial, NumberExpr, THyper, TNested, TOmega
from .ordinal import ONE as ORD1, Ordinal, ZERO as ORD0


@dataclass(frozen=True)
class Node:
    label: tuple  # ("real", q) ("omega",) ("sum",) ("times",) ("pow", i)
    #               ("L", ordinal) ("E", ordinal) ("hole", NumberExpr) ("stub", TNested)
    children: tuple[int, ...] = ()


@dataclass
class ExpTree:
    nodes: dict[int, Node] = field(default_factory=dict)
    root: int = 0
    _next: int = 0

    def new(self, label, children=()) -> int:
        i = self._next
        self._next = i + 1
        self.nodes[i] = Node(label, tuple(children))
        return i

    def height(self, nid: int | None = None) -> int:
        nid = self.root if nid is None else nid
        node = self.nodes[nid]
        if not node.children:
            return 0
        return 1 + max(self.height(c) for c in node.children)

    def holes(self) -> list[int]:
        return [i for i, n in self.nodes.items() if n.label[0] == "hole"]

    def stubs(self) -> list[int]:
        return [i for i, n in self.nodes.items() if n.label[0] == "stub"]

    def depth_of(self, nid: int) -> int:
        parents = {c: i for i, n in self.nodes.items() for c in n.children}
        d = 0
        while nid != self.root:
            nid = parents[nid]
            d += 1
        return d


@dataclass(frozen=True)
class Description:
    tree: ExpTree
    xi: dict[int, tuple[int, NumberExpr | None]]  # stub id -> (sign, rank)


# ---------------------------------------------------------------------------
# standard expansions


def _is_omega_mono(m: Monomial) -> bool:
    return (
        not m.is_one()
        and m.psi is not None
        and m.psi.is_zero()
        and m.iota == 1
        and isinstance(m.tail, TOmega)
        and m.tail.beta.is_zero()
    )


def _monomial_subtree(t: ExpTree, m: Monomial) -> int:
    """The unsimplified monomial shape; 1 and w collapse to leaves."""
    if m.is_one():
        return t.new(("real", Fraction(1)))
    if _is_omega_mono(m):
        return t.new(("omega",))
    if isinstance(m.tail, TNested):
        if m.psi.is_zero() and m.iota == 1:
            return t.new(("stub", m.tail))
        stub = t.new(("stub", m.tail))
        pw = t.new(("pow", m.iota), (stub,))
        hole = t.new(("hole", m.psi))
        e1 = t.new(("E", ORD1), (hole,))
        return t.new(("times",), (e1, pw))
    tail = m.tail
    if isinstance(tail, TOmega):
        g = t.new(("omega",))
    else:
        hole_u = t.new(("hole", tail.u))
        g = t.new(("E", tail.alpha), (hole_u,))
    if not tail.beta.is_zero():
        g = t.new(("L", tail.beta), (g,))
    pw = t.new(("pow", m.iota), (g,))
    hole_psi = t.new(("hole", m.psi))
    e1 = t.new(("E", ORD1), (hole_psi,))
    return t.new(("times",), (e1, pw))


def standard_monomial_expansion(m: Monomial) -> ExpTree:
    t = ExpTree()
    t.root = _monomial_subtree(t, m)
    return t


def _standard_expansion_into(t: ExpTree, a: NumberExpr) -> int:
    kids = []
    for c, m in a.terms:
        coeff = t.new(("real", c))
        mono = _monomial_subtree(t, m)
        kids.append(t.new(("times",), (coeff, mono)))
    return t.new(("sum",), tuple(kids))


def standard_expansion(a: NumberExpr) -> ExpTree:
    """Sum-rooted standard expansion of a number (height at most 6)."""
    t = ExpTree()
    t.root = _standard_expansion_into(t, a)
    return t


# ---------------------------------------------------------------------------
# evaluation (rules E1-E7)


def evaluate(t: ExpTree, budget: Budget | None = None) -> NumberExpr:
    b = ensure_budget(budget)
    memo: dict[int, NumberExpr] = {}

    def ev(nid: int) -> NumberExpr:
        if nid in memo:
            return memo[nid]
        node = t.nodes[nid]
        kind = node.label[0]
        if kind == "real":
            v = ex.const(node.label[1])
        elif kind == "omega":
            v = ex.OMEGA_EXPR
        elif kind == "hole":
            v = node.label[1]
        elif kind == "stub":
            v = ex.atom_series(node.label[1])
        elif kind == "sum":
            v = ex.ZERO_EXPR
            for c in node.children:
                v = ex.add(v, ev(c), b)
        elif kind == "times":
            if len(node.children) != 2:
                raise ValueError("product nodes are binary")
            from . import series
            v = series.mul(ev(node.children[0]), ev(node.children[1]), b)
        elif kind == "pow":
            (child,) = node.children
            base = ev(child)
            if node.label[1] == 1:
                v = base
            else:
                if len(base.terms) != 1 or base.terms[0][0] != 1:
                    raise StuckError("power nodes invert monomials only")
                v = NumberExpr(((Fraction(1), ex.mono_inv(base.terms[0][1])),))
        elif kind == "L":
            (child,) = node.children
            v = ex.rewrite_L(node.label[1], ev(child), b)
            if v is None:
                raise StuckError(f"L[{node.label[1]}] stuck during evaluation")
        elif kind == "E":
            (child,) = node.children
            arg = ev(child)
            if arg.is_zero():
                if node.label[1] == ORD1:
                    v = ex.ONE_EXPR
                else:
                    raise StuckError("E of 0 is only exp")
            else:
                m = ex.apply_E(node.label[1], arg, b) if ex.is_positive_infinite(arg) else None
                if m is None and node.label[1] == ORD1:
                    m = ex.exp_purely_large(arg, b)
                if m is None:
                    raise StuckError(f"E[{node.label[1]}] stuck during evaluation")
                v = NumberExpr(((Fraction(1), m),))
        else:
            raise ValueError(f"unknown label {node.label!r}")
        memo[nid] = v
        return v

    return ev(t.root)


# ---------------------------------------------------------------------------
# refinement and the settling construction


def _copy_into(dst: ExpTree, src: ExpTree, nid: int) -> int:
    node = src.nodes[nid]
    kids = tuple(_copy_into(dst, src, c) for c in node.children)
    return dst.new(node.label, kids)


def refines(t2: ExpTree, t1: ExpTree, budget: Budget | None = None) -> bool:
    """t2 refines t1: same shape wherever t1 is settled, holes may expand,
    and the evaluations agree at every shared node."""
    b = ensure_budget(budget)

    def walk(n2: int, n1: int) -> bool:
        node1, node2 = t1.nodes[n1], t2.nodes[n2]
        if node1.label[0] == "hole":
            v1 = node1.label[1]
            v2 = _subtree_value(t2, n2, b)
            return v2 is not None and v1 == v2
        if node1.label != node2.label:
            return False
        if len(node1.children) != len(node2.children):
            return False
        return all(walk(c2, c1) for c1, c2 in zip(node1.children, node2.children))

    return walk(t2.root, t1.root)


def _subtree_value(t: ExpTree, nid: int, b: Budget) -> NumberExpr | None:
    sub = ExpTree()
    sub.root = _copy_into(sub, t, nid)
    try:
        return evaluate(sub, b)
    except (StuckError, UndecidedError, ValueError):
        return None


def settle(a: NumberExpr, n: int, budget: Budget | None = None) -> ExpTree:
    """The n-th stage of the settling construction: T_0 is a bare placeholder
    and each stage replaces depth-k placeholders by standard expansions."""
    t = ExpTree()
    t.root = t.new(("hole", a))
    for k in range(n):
        _settle_step(t, k)
    return t


def _settle_step(t: ExpTree, depth: int, order=None):
    targets = [nid for nid in t.holes() if t.depth_of(nid) == depth]
    if order is not None:
        targets = order(targets)
    for nid in targets:
        val = t.nodes[nid].label[1]
        t.nodes[nid] = Node(("sum",), ())  # replaced in place by the expansion
        rid = _standard_expansion_into(t, val)
        t.nodes[nid] = t.nodes[rid]
        del t.nodes[rid]


def tree_expansion(a: NumberExpr, budget: Budget | None = None, order=None) -> Description:
    """Iterate settling to the placeholder-free fixpoint.  Nested atoms
    become stubs, whose ranks (with the path sign) form the xi map."""
    t = ExpTree()
    t.root = t.new(("hole", a))
    depth = 0
    while t.holes():
        _settle_step(t, depth, order)
        depth += 1
        if depth > 512:
            raise StuckError("tree expansion did not settle")
    xi: dict[int, tuple[int, NumberExpr | None]] = {}
    for sid in t.stubs():
        xi[sid] = (_path_sign(t, sid), t.nodes[sid].label[1].rank)
    return Description(t, xi)


def _path_sign(t: ExpTree, sid: int) -> int:
    """sign(r_0 ... r_{k-1}) * iota_0 ... iota_{k-1} along the root path."""
    parents = {c: i for i, n in t.nodes.items() for c in n.children}
    sign = 1
    nid = sid
    while nid != t.root:
        pid = parents[nid]
        node = t.nodes[pid]
        if node.label[0] == "pow":
            sign *= node.label[1]
        if node.label[0] == "times" and t.nodes[node.children[0]].label[0] == "real":
            if nid == node.children[1] and t.nodes[node.children[0]].label[1] < 0:
                sign *= -1
        nid = pid
    return sign


# ---------------------------------------------------------------------------
# serialization


def tree_equal(t1: ExpTree, t2: ExpTree) -> bool:
    """Structural equality up to node renumbering."""

    def shape(t: ExpTree, nid: int):
        node = t.nodes[nid]
        label = node.label
        if label[0] == "hole":
            from .textio import print_number
            label = ("hole", print_number(label[1]))
        if label[0] == "stub":
            s = label[1]
            label = ("stub", s.seq, s.level)
        return (label, tuple(shape(t, c) for c in node.children))

    return shape(t1, t1.root) == shape(t2, t2.root)


def _label_text(t: ExpTree, nid: int) -> str:
    from .textio import print_number
    from .ordinal import print_ordinal

    label = t.nodes[nid].label
    kind = label[0]
    if kind == "real":
        return str(label[1])
    if kind == "omega":
        return "w"
    if kind == "sum":
        return "sum"
    if kind == "times":
        return "*"
    if kind == "pow":
        return f"pow[{label[1]}]"
    if kind == "L":
        return f"L[{print_ordinal(label[1])}]"
    if kind == "E":
        return f"E[{print_ordinal(label[1])}]"
    if kind == "hole":
        return f"?({print_number(label[1])})"
    s = label[1]
    return f"N{{{s.seq}@{s.level}}}"


def to_json(desc: Description) -> str:
    from .textio import print_number

    t = desc.tree
    nodes = {
        str(i): {"label": _label_text(t, i), "children": [str(c) for c in t.nodes[i].children]}
        for i in sorted(t.nodes)
    }
    xi = {}
    for sid, (sign, rank) in desc.xi.items():
        xi[str(sid)] = None if rank is None else print_number(ex.scale(sign, rank))
    return json.dumps({"root": str(t.root), "nodes": nodes, "xi": xi}, indent=2)


def to_dot(desc: Description) -> str:
    t = desc.tree
    lines = ["digraph expansion {", "  node [shape=box];"]
    for i in sorted(t.nodes):
        text = _label_text(t, i).replace('"', '\\"')
        lines.append(f'  n{i} [label="{text}"];')
        for c in t.nodes[i].children:
            lines.append(f"  n{i} -> n{c};")
    lines.append("}")
    return "\n".join(lines)
