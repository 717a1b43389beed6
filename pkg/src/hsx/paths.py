"""Paths through expansions, good/bad index classification, nested truncation.

A path descends from a term of a number into the psi- or u-part of each
successive expansion; real entries and the entry w terminate it.  Every
prefix of a path is again a path, and enumeration returns them all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import Budget, GREATER, LESS, UndecidedError, ensure_budget
from . import expansion as xp
from . import expr as ex
from .expr import Monomial, NumberExpr, TNested
from . import ordinal as ords


@dataclass(frozen=True)
class LevelData:
    """Series the path chose from at this index (from the parent expansion)."""
    u: NumberExpr
    psi: NumberExpr


@dataclass(frozen=True)
class Path:
    entries: tuple[tuple[Fraction, Monomial], ...]

    def __len__(self) -> int:
        return len(self.entries)

    def is_terminal(self) -> bool:
        c, m = self.entries[-1]
        return m.is_one() or m == ex.OMEGA_MONO or isinstance(m.tail, TNested)


def _level_data(path_entries, i) -> LevelData:
    """u_{P,i} and psi_{P,i}: level 0 is the rooted term, later levels come
    from the expansion of the previous entry's monomial."""
    if i == 0:
        c, m = path_entries[0]
        return LevelData(NumberExpr(((c, m),)), ex.ZERO_EXPR)
    t = xp.expand(path_entries[i - 1][1])
    return LevelData(t.u, t.psi)


def _children(m: Monomial):
    """Terms a path may descend into from monomial m (psi-part + u-part)."""
    if m.is_one() or m == ex.OMEGA_MONO or isinstance(m.tail, TNested):
        return []
    t = xp.expand(m)
    out = list(t.psi.terms)
    if t.kind in ("I", "II"):
        out += list(t.u.terms)
    return out


def enumerate_paths(a: NumberExpr, budget: Budget | None = None) -> list[Path]:
    """All paths rooted at terms of a, prefixes included, in stable order."""
    out: list[Path] = []

    def grow(prefix):
        out.append(Path(tuple(prefix)))
        c, m = prefix[-1]
        if m.is_one():
            return
        for child in _children(m):
            grow(prefix + [child])

    for term in a.terms:
        grow([term])
    return out


def shift(p: Path, k: int) -> Path:
    """P shifted by k: the path the tail entries form at level k."""
    if not 0 <= k < len(p):
        raise ValueError("shift index out of range")
    return Path(p.entries[k:])


def concat(p: Path, q: Path, budget: Budget | None = None) -> Path:
    """Splice q onto p; q must start at a term of p's final expansion."""
    lvl = _level_data(p.entries, len(p))
    if q.entries[0] not in lvl.u.terms and q.entries[0] not in lvl.psi.terms:
        raise ValueError("concat: q does not start inside the final expansion of p")
    return Path(p.entries + q.entries)


GOOD = "good"


@dataclass(frozen=True)
class Bad:
    rule: int

    def __str__(self):
        return f"bad({self.rule})"


def classify_index(p: Path, i: int, budget: Budget | None = None):
    """Good, or Bad(rule) with the first matching rule of the four.

    The implemented reading keeps finite descents through expansion data
    unflagged: an entry is bad when it sits at a u-minimum it should not
    occupy (wrong hyperlog prefix on a type-I atom, non-unit coefficient,
    or a psi-collision), or when it is a non-minimal u-term.
    """
    b = ensure_budget(budget)
    if not 0 <= i < len(p):
        raise ValueError("index out of range")
    r, m = p.entries[i]
    if m.is_one():
        return GOOD
    lvl = _level_data(p.entries, i)
    in_u = any(m == n for _, n in lvl.u.terms)
    in_psi = any(m == n for _, n in lvl.psi.terms)
    if not in_u:
        return GOOD  # psi-branches carry no minimality obligation here
    large = [n for _, n in lvl.u.terms if ex.mono_class(n) > 0]
    if large:
        least = large[-1]
        cm = ex.compare_monomials(m, least, b)
        if cm is None:
            raise UndecidedError("classify_index: undecided minimality comparison")
        if cm != 0:
            return Bad(1)
    own = xp.expand(m)
    if own.kind == "I" and not own.beta.is_zero():
        return Bad(2)
    if own.beta.is_zero() and r not in (1, -1):
        return Bad(3)
    if own.beta.is_zero() and r in (1, -1) and in_psi:
        return Bad(4)
    return GOOD


# ---------------------------------------------------------------------------
# bounded nested-truncation relation


@dataclass(frozen=True)
class TruncVerdict:
    state: str  # "holds" | "fails" | "unknown"
    level: int | None = None

    def holds(self) -> bool:
        return self.state == "holds"


HOLDS = lambda n: TruncVerdict("holds", n)  # noqa: E731
FAILS = TruncVerdict("fails")
UNKNOWN_T = TruncVerdict("unknown")


def nested_trunc(a: NumberExpr, b_: NumberExpr, depth: int, budget: Budget | None = None) -> TruncVerdict:
    """Search for a <~_n b with n <= depth; reports the least such n."""
    bud = ensure_budget(budget)
    unknown = False
    for n in range(depth + 1):
        v = _ntrunc(a, b_, n, bud)
        if v is True:
            return HOLDS(n)
        if v is None:
            unknown = True
    return UNKNOWN_T if unknown else FAILS


def _ntrunc(a: NumberExpr, b_: NumberExpr, n: int, bud: Budget):
    """True / False / None(undecided) for a <~_n b."""
    base = _ntrunc0(a, b_, bud)
    if base is not False:
        return base
    if n == 0:
        return False
    unknown = False
    # configurations share the split a = phi ++ sign(r) * (last monomial)
    if a.is_zero():
        return False
    phi = NumberExpr(a.terms[:-1], a.exact)
    ca, ma = a.terms[-1]
    if ca not in (1, -1):
        return False
    k = len(phi.terms)
    if len(b_.terms) <= k or b_.terms[:k] != phi.terms:
        return False
    cb, mb = b_.terms[k]
    if (ca > 0) != (cb > 0):
        return False
    # Configuration I: compare hyperexponential shells with matching wrappers
    if (
        not ma.is_one()
        and not mb.is_one()
        and not isinstance(ma.tail, TNested)
        and not isinstance(mb.tail, TNested)
        and isinstance(ma.tail, ex.THyper)
        and isinstance(mb.tail, ex.THyper)
        and ma.tail.beta.is_zero()
        and ma.iota == mb.iota
        and ma.psi == mb.psi
        and ords.compare(ma.tail.alpha, mb.tail.alpha) == 0
    ):
        r = _ntrunc(ma.tail.u, mb.tail.u, n - 1, bud)
        if r is True:
            return True
        if r is None:
            unknown = True
    # Configuration II: pure exponential against a shell with larger psi
    if not ma.is_one() and not mb.is_one() and not isinstance(mb.tail, TNested):
        try:
            la = ex.mono_log(ma)
            psi_b = mb.psi
            r = _ntrunc(la, psi_b, n - 1, bud)
            if r is True:
                return True
            if r is None:
                unknown = True
        except Exception:
            unknown = True
    return None if unknown else False


def _ntrunc0(a: NumberExpr, b_: NumberExpr, bud: Budget):
    from . import series
    try:
        if series.is_truncation(a, b_, bud):
            return True
    except UndecidedError:
        return None
    if a.is_zero():
        return False
    # a = phi ++ sign(r) m against b = phi ++ r m ++ delta
    phi = NumberExpr(a.terms[:-1], a.exact)
    ca, ma = a.terms[-1]
    if ca not in (1, -1):
        return False
    k = len(phi.terms)
    if len(b_.terms) <= k or b_.terms[:k] != phi.terms:
        return False
    cb, mb = b_.terms[k]
    if mb == ma and (ca > 0) == (cb > 0):
        return True
    return False
