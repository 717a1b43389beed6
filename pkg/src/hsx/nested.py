"""Coding sequences, admissibility probes, and lazily unfolded nested atoms.

A coding sequence lists per-level data (phi, eps, psi, iota, alpha).  It is
finitely presented: an explicit prefix, optionally looped from `period`
onward; each wrap of the loop may shift every hyperlog index by a fixed
amount, which is how towers like sqrt(w) + e^(sqrt(log w) - e^(...)) are
written down with two levels.

Registered sequences back nested atoms ``N{name}``; `unfold` rewrites such
an atom finitely many levels, keeping a shifted handle innermost.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import Budget, GREATER, LESS, StuckError, UndecidedError, ensure_budget
from . import expansion as xp
from . import expr as ex
from . import ordinal as ords
from .expr import Monomial, NumberExpr, THyper, TNested, TOmega
from .ordinal import ONE as ORD1, Ordinal, ZERO as ORD0


@dataclass(frozen=True)
class CodingLevel:
    phi: NumberExpr
    eps: int
    psi: NumberExpr
    iota: int
    alpha: Ordinal


@dataclass(frozen=True)
class CodingSequence:
    levels: tuple[CodingLevel, ...]
    period: int | None = None  # index the loop restarts at
    wrap_shift: Ordinal | None = None  # hyperlog index shift per wrap

    def level(self, i: int) -> CodingLevel:
        if i < len(self.levels):
            return self.levels[i]
        if self.period is None:
            raise IndexError(f"level {i} beyond a finitely-listed sequence")
        cycle = len(self.levels) - self.period
        if cycle <= 0:
            raise IndexError("empty period")
        wraps = (i - self.period) // cycle
        base = self.levels[self.period + (i - self.period) % cycle]
        if self.wrap_shift is None or self.wrap_shift.is_zero():
            return base
        delta = _ordinal_times_int(self.wrap_shift, wraps)
        if delta.is_zero():
            return base
        return CodingLevel(
            _shift_expr(base.phi, delta),
            base.eps,
            _shift_expr(base.psi, delta),
            base.iota,
            base.alpha,
        )


def _ordinal_times_int(a: Ordinal, n: int) -> Ordinal:
    out = ORD0
    for _ in range(n):
        out = ords.hess_sum(out, a)
    return out


def _shift_expr(e: NumberExpr, delta: Ordinal) -> NumberExpr:
    """Substitute w -> L_delta(w), exactly.  Supported on level data whose
    atoms stay atoms under the shift; anything else raises StuckError."""
    pairs = []
    for c, m in e.terms:
        pairs.append((c, _shift_value(m, delta)))
    out = ex.ZERO_EXPR
    for c, v in pairs:
        out = ex.add(out, ex.scale(c, v))
    return out


def _shift_value(m: Monomial, delta: Ordinal) -> NumberExpr:
    if m.is_one():
        return ex.ONE_EXPR
    if isinstance(m.tail, TNested):
        raise StuckError("cannot shift a nested atom")
    tv = _shift_atom_value(m.tail, delta)
    if m.psi.is_zero() and m.iota == 1:
        return tv
    if len(tv.terms) != 1 or tv.terms[0][0] != 1:
        raise StuckError("shifted tail is no longer a monomial")
    core = tv.terms[0][1]
    psi = _shift_expr(m.psi, delta)
    mono = ex.exp_purely_large(ex.add(psi, ex.scale(m.iota, ex.mono_log(core))))
    return NumberExpr(((Fraction(1), mono),))


def _shift_atom_value(tail, delta: Ordinal) -> NumberExpr:
    if isinstance(tail, TOmega):
        base = ex.atom_series(TOmega(delta))
        if tail.beta.is_zero():
            return base
        out = ex.rewrite_L(tail.beta, base)
        if out is None:
            raise StuckError("hyperlog shift left no exact form")
        return out
    u = _shift_expr(tail.u, delta)
    core = ex.apply_E(tail.alpha, u)
    if core is None:
        raise StuckError("hyperexponential shift left no exact form")
    out = NumberExpr(((Fraction(1), core),))
    if not tail.beta.is_zero():
        out = ex.rewrite_L(tail.beta, out)
        if out is None:
            raise StuckError("hyperlog shift left no exact form")
    return out


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Verdict:
    level: int
    condition: str  # "a".."e"
    state: str  # "pass" | "fail" | "unknown"
    detail: str = ""


def validate(seq: CodingSequence, horizon: int | None = None) -> list[Verdict]:
    """Per-level, per-condition verdicts for the coding-sequence conditions."""
    out: list[Verdict] = []
    if horizon is None:
        horizon = len(seq.levels) + (len(seq.levels) - (seq.period or 0) if seq.period is not None else 0)
    horizon = max(horizon, len(seq.levels))

    def have(i):
        return i < horizon and (seq.period is not None or i < len(seq.levels))

    for i in range(horizon):
        if not have(i):
            break
        lv = seq.level(i)
        if lv.eps not in (-1, 1) or lv.iota not in (-1, 1):
            out.append(Verdict(i, "a", "fail", "signs must be -1 or +1"))
        if not lv.alpha.is_power_of_omega():
            out.append(Verdict(i, "a", "fail", "alpha must be a power of w, alpha >= 1"))
            continue
        ok_a = lv.psi.is_zero() or ex.is_purely_large(lv.psi)
        out.append(Verdict(i, "a", "pass" if ok_a else "fail", "psi purely large"))
        if have(i + 1):
            nxt = seq.level(i + 1)
            if nxt.phi.is_zero():
                out.append(Verdict(i, "b", "pass", "phi_{i+1} = 0"))
            elif not ex.is_positive_infinite(nxt.phi):
                out.append(Verdict(i, "b", "fail", "phi_{i+1} not positive infinite"))
            else:
                t = xp.is_truncated(nxt.phi, lv.alpha)
                state = {1: "pass", 0: "unknown", -1: "fail"}[t]
                out.append(Verdict(i, "b", state, "phi_{i+1} alpha_i-truncated"))
            if lv.alpha == ORD1:
                ok_c = lv.psi.is_zero() and (not nxt.psi.is_zero() or nxt.alpha == ORD1)
                out.append(Verdict(i, "c", "pass" if ok_c else "fail",
                                   "alpha=1 forces psi=0 and (psi'=0 => alpha'=1)"))
            else:
                out.append(Verdict(i, "c", "pass", "vacuous"))
            if nxt.phi.is_zero() and nxt.psi.is_zero():
                ok_d = (
                    ords.compare(lv.alpha, nxt.alpha) is not LESS
                    and nxt.eps == 1
                    and nxt.iota == 1
                )
                out.append(Verdict(i, "d", "pass" if ok_d else "fail",
                                   "zero level forces alpha decrease and +1 signs"))
            else:
                out.append(Verdict(i, "d", "pass", "vacuous"))
    # condition (e): some level in the loop carries data
    if seq.period is not None:
        cycle = seq.levels[seq.period:]
        ok_e = any(not lv.phi.is_zero() or not lv.psi.is_zero() for lv in cycle)
        out.append(Verdict(-1, "e", "pass" if ok_e else "fail",
                           "period must contain a nonzero phi or psi"))
    else:
        out.append(Verdict(-1, "e", "unknown", "finitely-listed tail unspecified"))
    return out


def validation_ok(report: list[Verdict]) -> bool:
    return all(v.state != "fail" for v in report)


# ---------------------------------------------------------------------------
# coordinate maps and cut generators


def step(seq: CodingSequence, i: int, x: NumberExpr, budget: Budget | None = None) -> NumberExpr:
    """One coordinate change: phi_i + eps_i e^(psi_i) (E_alpha_i x)^iota_i.

    At strength 1 the hyperexponential is the (total) exp, so cut
    generators with zero or negative arguments stay inside the domain.
    """
    b = ensure_budget(budget)
    lv = seq.level(i)
    if lv.alpha == ORD1:
        mono = ex.exp_purely_large(ex.add(lv.psi, ex.scale(lv.iota, x), b), b)
    else:
        if not ex.is_positive_infinite(x):
            raise StuckError(f"level {i}: E_[{lv.alpha}] needs a positive infinite argument")
        core = ex.apply_E(lv.alpha, x, b)
        if core is None:
            raise StuckError(f"level {i}: hyperexponential stuck")
        if lv.psi.is_zero() and lv.iota == 1:
            mono = core
        else:
            mono = ex.exp_purely_large(ex.add(lv.psi, ex.scale(lv.iota, ex.mono_log(core)), b), b)
    return ex.add(lv.phi, NumberExpr(((Fraction(lv.eps), mono),)), b)


def phi_map(seq: CodingSequence, i: int, j: int, x: NumberExpr, budget: Budget | None = None) -> NumberExpr:
    """Compose the level maps from j-1 down to i (level-j value -> level-i)."""
    if i > j:
        raise ValueError("phi_map requires i <= j")
    cur = x
    for k in range(j - 1, i - 1, -1):
        cur = step(seq, k, cur, budget)
    return cur


def sigma(seq: CodingSequence, i: int, j: int) -> int:
    s = 1
    for k in range(i, j):
        lv = seq.level(k)
        s *= lv.eps * lv.iota
    return s


DEFAULT_SAMPLES = (Fraction(1, 2), Fraction(1), Fraction(2))


def cut_generators(seq: CodingSequence, i: int, samples=DEFAULT_SAMPLES, budget: Budget | None = None):
    """Sampled left/right cut generators at level i, pushed down to level 0.

    The [1]/[2] families follow the definition exactly; the [3] family is
    realized by translations when alpha_i = 1 (the translation orbit is
    mutually cofinal with the defining one there) and is left to the
    admissibility probe's truncation check for alpha_i >= w.
    """
    b = ensure_budget(budget)
    lv = seq.level(i)
    s_i = sigma(seq, 0, i)
    left: list[NumberExpr] = []
    right: list[NumberExpr] = []
    for r in samples:
        for _, m in lv.phi.terms:
            mono = NumberExpr(((Fraction(r), m),))
            left.append(phi_map(seq, 0, i, ex.sub(lv.phi, ex.scale(s_i, mono), b), b))
            right.append(phi_map(seq, 0, i, ex.add(lv.phi, ex.scale(s_i, mono), b), b))
        for _, m in lv.psi.terms:
            mono = NumberExpr(((Fraction(r), m),))
            lo = ex.exp_purely_large(ex.sub(lv.psi, ex.scale(lv.eps * s_i, mono), b), b)
            hi = ex.exp_purely_large(ex.add(lv.psi, ex.scale(lv.eps * s_i, mono), b), b)
            left.append(phi_map(seq, 0, i, ex.add(lv.phi, NumberExpr(((Fraction(lv.eps), lo),)), b), b))
            right.append(phi_map(seq, 0, i, ex.add(lv.phi, NumberExpr(((Fraction(lv.eps), hi),)), b), b))
    nxt = seq.level(i + 1)
    if not nxt.phi.is_zero() and lv.alpha == ORD1:
        # translations of phi_{i+1} exponentiate to rational multiples, so the
        # sampled class stays exactly representable
        g3 = sigma(seq, 0, i + 1) * nxt.eps
        base = ex.exp_purely_large(ex.add(lv.psi, ex.scale(lv.iota, nxt.phi), b), b)
        factors = set()
        for r in samples:
            if Fraction(r) != 1:
                factors |= {Fraction(r), 1 / Fraction(r)}
        for s in sorted(factors):
            g = ex.add(lv.phi, NumberExpr(((Fraction(lv.eps) * s, base),)), b)
            g = phi_map(seq, 0, i, g, b)
            (left if g3 == 1 else right).append(g)
    return left, right


# ---------------------------------------------------------------------------
# admissibility probe


@dataclass(frozen=True)
class ProbeResult:
    state: str  # "consistent" | "violated" | "unknown"
    witness: str = ""


def _seed_level(seq: CodingSequence, depth: int) -> int:
    d = depth
    cap = depth + 64
    while d < cap:
        try:
            lv = seq.level(d)
        except IndexError:
            raise StuckError("no usable seed level for the witness tower")
        if ex.is_positive_infinite(lv.phi):
            return d
        d += 1
    raise StuckError("no usable seed level for the witness tower")


def _witness_coords(seq: CodingSequence, depth: int, budget: Budget | None = None) -> dict[int, NumberExpr]:
    """Level coordinates of the depth-truncated witness tower (level -> value)."""
    d = _seed_level(seq, depth)
    coords = {d: seq.level(d).phi}
    for i in range(d - 1, -1, -1):
        coords[i] = step(seq, i, coords[i + 1], budget)
    return coords


def _witness_tower(seq: CodingSequence, depth: int, budget: Budget | None = None) -> NumberExpr:
    """Finite truncation of the nested value, as a level-0 number."""
    return _witness_coords(seq, depth, budget)[0]


def probe_admissible(seq: CodingSequence, depth: int, samples=DEFAULT_SAMPLES,
                     budget: Budget | None = None) -> ProbeResult:
    """Check the sampled cut inequalities and the per-level admissibility
    conditions against a depth-truncated witness tower.

    The inequalities are checked in level coordinates, where the sampled
    generators stay inside the exact fragment; the level maps are strictly
    monotone, so the verdicts agree with the pushed-down formulation.
    """
    report = validate(seq)
    if not validation_ok(report):
        bad = next(v for v in report if v.state == "fail")
        return ProbeResult("violated", f"coding condition ({bad.condition}) fails at level {bad.level}")
    unknown = False
    try:
        coords = _witness_coords(seq, depth)
    except (StuckError, UndecidedError, IndexError) as e:
        return ProbeResult("unknown", str(e))
    seed = max(coords)
    for i in range(min(depth, seed)):
        lv = seq.level(i)
        w = coords[i]
        # sampled [1]-bracket: phi_i - r*m < w_i < phi_i + r*m
        for r in samples:
            for _, mono in lv.phi.terms:
                t = NumberExpr(((Fraction(r), mono),))
                lo = ex.compare_series(ex.sub(lv.phi, t), w)
                hi = ex.compare_series(w, ex.add(lv.phi, t))
                if lo is None or hi is None:
                    unknown = True
                elif lo is not LESS or hi is not LESS:
                    return ProbeResult(
                        "violated", f"witness leaves the phi-bracket at level {i} (r={r})"
                    )
        if i + 1 < seed:
            v = _level_conditions(seq, i, coords[i + 1])
            if v == 0:
                unknown = True
            elif v < 0:
                return ProbeResult("violated", f"admissibility condition fails at level {i}")
    return ProbeResult("unknown" if unknown else "consistent")


def _level_conditions(seq: CodingSequence, i: int, w_next: NumberExpr) -> int:
    """supp psi_i > log E_alpha_i(w_{i+1}) and phi_{i+1} strictly truncates
    sharp_alpha_i(w_{i+1}); 1 pass / 0 unknown / -1 fail."""
    from . import series
    lv = seq.level(i)
    try:
        if not ex.is_positive_infinite(w_next):
            return 0
        core = ex.apply_E(lv.alpha, w_next)
        if core is None:
            return 0
        log_core = ex.mono_log(core)
    except (StuckError, UndecidedError, IndexError, ValueError):
        return 0
    for _, m in lv.psi.terms:
        c = ex.compare_series(NumberExpr(((Fraction(1), m),)), log_core)
        if c is None:
            return 0
        if c is not GREATER:
            return -1
    nxt = seq.level(i + 1)
    if not nxt.phi.is_zero():
        sh = xp.sharp(w_next, lv.alpha)
        if sh is None:
            return 0
        try:
            if not series.is_truncation(nxt.phi, sh) or nxt.phi == sh:
                return -1
        except UndecidedError:
            return 0
    return 1


# ---------------------------------------------------------------------------
# registry and lazy unfolding


@dataclass(frozen=True)
class NestedAtomHandle:
    seq: str
    level: int = 0
    rank: NumberExpr | None = None


_REGISTRY: dict[str, CodingSequence] = {}
_REGISTRY_LOCK = threading.Lock()


def register(seq: CodingSequence, name: str, rank: NumberExpr | None = None,
             probe_depth: int = 3) -> NestedAtomHandle:
    """Validate, probe, and register a sequence; returns a level-0 handle."""
    report = validate(seq)
    if not validation_ok(report):
        bad = next(v for v in report if v.state == "fail")
        raise ValueError(f"coding sequence invalid: condition ({bad.condition}) at level {bad.level}")
    pr = probe_admissible(seq, probe_depth)
    if pr.state == "violated":
        raise ValueError(f"sequence not admissible at depth {probe_depth}: {pr.witness}")
    with _REGISTRY_LOCK:
        _REGISTRY[name] = seq
    return NestedAtomHandle(name, 0, rank)


def lookup(name: str) -> CodingSequence | None:
    return _REGISTRY.get(name)


def clear_registry():
    with _REGISTRY_LOCK:
        _REGISTRY.clear()


def handle_atom(h: NestedAtomHandle) -> NumberExpr:
    return ex.atom_series(TNested(h.seq, h.level, h.rank))


def shift_handle(h: NestedAtomHandle, k: int) -> NestedAtomHandle:
    """The level-(l+k) handle, rank multiplied by the accumulated sign."""
    seq = lookup(h.seq)
    if seq is None:
        raise ValueError(f"unregistered nested sequence {h.seq!r}")
    rank = h.rank
    if rank is not None:
        rank = ex.scale(sigma_levels(seq, h.level, h.level + k), rank)
    return NestedAtomHandle(h.seq, h.level + k, rank)


def sigma_levels(seq: CodingSequence, i: int, j: int) -> int:
    return sigma(seq, i, j)


def unfold(h: NestedAtomHandle, k: int, budget: Budget | None = None) -> NumberExpr:
    """Rewrite the nested atom k levels; the innermost slot keeps a shifted
    handle whose rank picks up the accumulated sign."""
    seq = lookup(h.seq)
    if seq is None:
        raise ValueError(f"unregistered nested sequence {h.seq!r}")
    return _unfold_levels(seq, h.seq, h.level, h.rank, k, ensure_budget(budget))


def unfold_tail(t: TNested, k: int, budget: Budget | None = None) -> NumberExpr | None:
    seq = lookup(t.seq)
    if seq is None:
        return None
    try:
        return _unfold_levels(seq, t.seq, t.level, t.rank, k, ensure_budget(budget))
    except (StuckError, UndecidedError, IndexError):
        return None


def _unfold_levels(seq: CodingSequence, name: str, level: int, rank, k: int, b: Budget) -> NumberExpr:
    if k == 0:
        return ex.atom_series(TNested(name, level, rank))
    lv = seq.level(level)
    inner_rank = None if rank is None else ex.scale(lv.eps * lv.iota, rank)
    inner = _unfold_levels(seq, name, level + 1, inner_rank, k - 1, b)
    tail = THyper(ORD0, lv.alpha, inner)
    if lv.psi.is_zero() and lv.iota == 1:
        mono = ex.atom(tail)
    else:
        mono = Monomial(lv.psi, lv.iota, tail)
    # admissibility gives supp phi_l > the level monomial, so the
    # concatenation is already sorted; no comparisons needed here
    return NumberExpr(lv.phi.terms + ((Fraction(lv.eps), mono),))


def substitute_innermost(e: NumberExpr, replacement: NumberExpr, budget: Budget | None = None) -> NumberExpr:
    """Replace the (unique) innermost nested atom of e by `replacement`."""
    b = ensure_budget(budget)

    def in_expr(x: NumberExpr) -> NumberExpr | None:
        for idx, (c, m) in enumerate(x.terms):
            nm = in_mono(m)
            if nm is not None:
                terms = list(x.terms)
                del terms[idx]
                return ex.add(NumberExpr(tuple(terms), x.exact), ex.scale(c, nm), b)
        return None

    def in_mono(m: Monomial) -> NumberExpr | None:
        if m.is_one():
            return None
        if isinstance(m.tail, TNested):
            if not m.psi.is_zero() or m.iota != 1:
                raise StuckError("cannot substitute under a wrapped nested atom")
            return replacement
        if isinstance(m.tail, THyper):
            nu = in_expr(m.tail.u)
            if nu is not None:
                core = ex.apply_E(m.tail.alpha, nu, b)
                if core is None:
                    raise StuckError("substitution made the hyperexponential stuck")
                if m.psi.is_zero() and m.iota == 1 and m.tail.beta.is_zero():
                    return NumberExpr(((Fraction(1), core),))
                out = NumberExpr(((Fraction(1), core),))
                if not m.tail.beta.is_zero():
                    out = ex.rewrite_L(m.tail.beta, out, b)
                    if out is None or len(out.terms) != 1:
                        raise StuckError("substitution broke the atom prefix")
                mono = out.terms[0][1]
                if m.psi.is_zero() and m.iota == 1:
                    return NumberExpr(((Fraction(1), mono),))
                full = ex.exp_purely_large(ex.add(m.psi, ex.scale(m.iota, ex.mono_log(mono)), b), b)
                return NumberExpr(((Fraction(1), full),))
        return None

    out = in_expr(e)
    if out is None:
        raise ValueError("no nested atom to substitute")
    return out
