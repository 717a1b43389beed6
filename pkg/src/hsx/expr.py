"""Expression AST, monomial comparison engine, and exact hyperlog rewrites.

A ``NumberExpr`` is a finite sorted sum of rational multiples of monomials.
A ``Monomial`` is 1 or a shell ``e^psi * (tail)^iota`` whose tail is an atom:
``L_beta(w)``, ``L_beta(E_alpha^u)``, or a registered nested atom.  Shells in
normal form keep ``supp psi`` strictly above the log of the tail, which is
what makes sign and ordering questions local.

Comparisons run a bounded rule ladder and answer ``UNDECIDED`` (None) when
no exact rewrite chain settles the question; rewrites answer ``None`` when
stuck.  Neither ever guesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    EQUAL,
    GREATER,
    LESS,
    UNDECIDED,
    Budget,
    NormalizationUndecided,
    StuckError,
    ensure_budget,
)
from . import ordinal as ords
from .ordinal import OMEGA, ONE as ORD1, Ordinal, ZERO as ORD0


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class TOmega:
    """Tail L_beta(w); beta = 0 is w itself."""
    beta: Ordinal


@dataclass(frozen=True)
class THyper:
    """Tail L_beta(E_alpha^u) with alpha a power of w, alpha >= 1."""
    beta: Ordinal
    alpha: Ordinal
    u: "NumberExpr"


@dataclass(frozen=True)
class TNested:
    """A registered nested atom: the value at `level` of coding sequence `seq`."""
    seq: str
    level: int
    rank: "NumberExpr | None" = None


Tail = TOmega | THyper | TNested


@dataclass(frozen=True)
class Monomial:
    psi: "NumberExpr | None"
    iota: int
    tail: "Tail | None"

    def is_one(self) -> bool:
        return self.tail is None

    def __repr__(self):  # avoids recursive dataclass dumps in test output
        from .textio import print_monomial
        try:
            return f"Mono<{print_monomial(self)}>"
        except Exception:
            return f"Mono<iota={self.iota}>"


@dataclass(frozen=True)
class NumberExpr:
    terms: tuple[tuple[Fraction, Monomial], ...] = ()
    exact: bool = True

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        from .textio import print_number
        try:
            tag = "" if self.exact else "~"
            return f"Num<{tag}{print_number(self)}>"
        except Exception:
            return f"Num<{len(self.terms)} terms>"


MONO_ONE = Monomial(None, 0, None)
ZERO_EXPR = NumberExpr()


def atom(tail: Tail) -> Monomial:
    return Monomial(ZERO_EXPR, 1, tail)


def atom_series(tail: Tail) -> NumberExpr:
    return NumberExpr(((Fraction(1), atom(tail)),))


OMEGA_MONO = atom(TOmega(ORD0))
OMEGA_EXPR = atom_series(TOmega(ORD0))
ONE_EXPR = NumberExpr(((Fraction(1), MONO_ONE),))


def const(q) -> NumberExpr:
    q = Fraction(q)
    return ZERO_EXPR if q == 0 else NumberExpr(((q, MONO_ONE),))


# ---------------------------------------------------------------------------
# cheap structural classifiers (no budget needed)


def shell_sign(m: Monomial) -> int:
    """Sign of log m: +1 for infinite shells, -1 for infinitesimal ones."""
    if m.is_one():
        return 0
    if isinstance(m.tail, TNested):
        return m.iota if m.psi.is_zero() else (1 if m.psi.terms[0][0] > 0 else -1)
    if not m.psi.is_zero():
        return 1 if m.psi.terms[0][0] > 0 else -1
    return m.iota


def mono_class(m: Monomial) -> int:
    """+1 infinite, 0 the unit, -1 infinitesimal."""
    return 0 if m.is_one() else shell_sign(m)


def is_purely_large(f: NumberExpr) -> bool:
    return all(mono_class(m) > 0 for _, m in f.terms)


def is_positive_infinite(f: NumberExpr) -> bool:
    return bool(f.terms) and f.terms[0][0] > 0 and mono_class(f.terms[0][1]) > 0


def _require_pos_infinite(f: NumberExpr, who: str):
    if not is_positive_infinite(f):
        raise ValueError(f"{who}: argument must be positive infinite")


def mono_inv(m: Monomial) -> Monomial:
    if m.is_one():
        return m
    return Monomial(neg(m.psi), -m.iota, m.tail)


def is_log_atomic(m: Monomial) -> bool:
    """Membership in the strength-w atomic class of our atoms."""
    if m.is_one() or not m.psi.is_zero() or m.iota != 1:
        return False
    if isinstance(m.tail, TOmega):
        return True
    if isinstance(m.tail, THyper):
        return ords.compare(m.tail.alpha, OMEGA) is not LESS
    return False


def is_atomic_monomial(m: Monomial, strength: Ordinal) -> bool:
    """L_{<strength}-atomicity for strength a power of w (Lemma-style split)."""
    if not strength.is_power_of_omega():
        raise ValueError("strength must be a power of w")
    if m.is_one():
        return False
    if not m.psi.is_zero() or m.iota != 1:
        return strength == ORD1 and mono_class(m) > 0
    if isinstance(m.tail, TNested):
        return strength == ORD1
    threshold = ords.alpha_over_omega(strength)
    _, lo = ords.split_at(m.tail.beta, threshold)
    if not lo.is_zero():
        return False
    if isinstance(m.tail, TOmega):
        return True
    return ords.compare(m.tail.alpha, strength) is not LESS


def tail_atomic_split(phi: NumberExpr):
    """Decompose purely large phi as psi ++ iota*a with a log-atomic, or None."""
    if phi.is_zero():
        return None
    c, m = phi.terms[-1]
    if c not in (1, -1) or not is_log_atomic(m):
        return None
    return NumberExpr(phi.terms[:-1], phi.exact), int(c), m


# ---------------------------------------------------------------------------
# series construction


def _merge_sorted(pairs, exact, budget: Budget | None):
    # each placement comparison runs under its own fresh budget: the step
    # budget caps one rule-ladder chain, not the size of a bulk sort
    out: list[tuple[Fraction, Monomial]] = []
    for c, m in pairs:
        if c == 0:
            continue
        lo, hi = 0, len(out)
        placed = False
        while lo < hi:
            mid = (lo + hi) // 2
            cm = compare_monomials(m, out[mid][1], None)
            if cm is UNDECIDED:
                raise NormalizationUndecided(m, out[mid][1])
            if cm is EQUAL:
                c2 = out[mid][0] + c
                if c2 == 0:
                    out.pop(mid)
                else:
                    out[mid] = (c2, m)
                placed = True
                break
            if cm is GREATER:
                hi = mid
            else:
                lo = mid + 1
        if not placed:
            out.insert(lo, (c, m))
    return NumberExpr(tuple(out), exact)


def nexpr(pairs, exact: bool = True, budget: Budget | None = None) -> NumberExpr:
    """Build a NumberExpr, sorting strictly by the monomial order.

    Raises NormalizationUndecided when two monomials cannot be ordered.
    """
    return _merge_sorted(pairs, exact, budget)


def add(f: NumberExpr, g: NumberExpr, budget: Budget | None = None) -> NumberExpr:
    return nexpr(f.terms + g.terms, f.exact and g.exact, budget)


def scale(q, f: NumberExpr) -> NumberExpr:
    q = Fraction(q)
    if q == 0:
        return NumberExpr((), f.exact)
    return NumberExpr(tuple((q * c, m) for c, m in f.terms), f.exact)


def neg(f: NumberExpr) -> NumberExpr:
    return scale(-1, f)


def sub(f: NumberExpr, g: NumberExpr, budget: Budget | None = None) -> NumberExpr:
    return add(f, neg(g), budget)


def add_real(f: NumberExpr, q) -> NumberExpr:
    """Add a rational constant; placement needs no general comparisons."""
    q = Fraction(q)
    if q == 0:
        return f
    out = []
    done = False
    for c, m in f.terms:
        k = mono_class(m)
        if k > 0:
            out.append((c, m))
        elif k == 0:
            c2 = c + q
            if c2 != 0:
                out.append((c2, m))
            done = True
        else:
            if not done:
                out.append((q, MONO_ONE))
                done = True
            out.append((c, m))
    if not done:
        out.append((q, MONO_ONE))
    return NumberExpr(tuple(out), f.exact)


def split_classes(f: NumberExpr):
    """(purely large part, real coefficient, infinitesimal part)."""
    large, small = [], []
    real = Fraction(0)
    for c, m in f.terms:
        k = mono_class(m)
        if k > 0:
            large.append((c, m))
        elif k == 0:
            real = c
        else:
            small.append((c, m))
    return NumberExpr(tuple(large), f.exact), real, NumberExpr(tuple(small), f.exact)


# ---------------------------------------------------------------------------
# logarithms of monomials (always exact)


def _atom_log_series(tail: Tail, budget: Budget | None = None) -> NumberExpr:
    """log of the atom monomial carried by `tail`, as an exact series."""
    if isinstance(tail, TOmega):
        return atom_series(TOmega(ords.ord_sum(tail.beta, ORD1)))
    if isinstance(tail, THyper):
        if tail.alpha == ORD1:
            return tail.u
        nb = ords.ord_sum(tail.beta, ORD1)
        if ords.prec(nb, ords.alpha_over_omega(tail.alpha)):
            return atom_series(THyper(nb, tail.alpha, tail.u))
        # only beta = 0 with alpha = w reaches here: absorb one log into u,
        # re-canonicalizing (the shifted argument may unlock an inverse pair)
        m = _E(tail.alpha, add_real(tail.u, -1), ensure_budget(budget))
        if m is None:
            raise StuckError("no exact logarithm for this hyperexponent")
        return NumberExpr(((Fraction(1), m),))
    raise StuckError("no exact logarithm for a nested atom")


def mono_log(m: Monomial) -> NumberExpr:
    """Exact log of a shell: psi ++ iota * log(tail atom)."""
    if m.is_one():
        return ZERO_EXPR
    tail_log = _atom_log_series(m.tail)
    scaled = scale(m.iota, tail_log)
    # normal form guarantees supp psi > every monomial of the tail log
    return NumberExpr(m.psi.terms + scaled.terms, m.psi.exact and scaled.exact)


# ---------------------------------------------------------------------------
# comparison engine


def compare_monomials(m: Monomial, n: Monomial, budget: Budget | None = None):
    """Decide m vs n via the rule ladder; UNDECIDED is a first-class outcome."""
    return _cmp_mono(m, n, ensure_budget(budget))


def compare_series(f: NumberExpr, g: NumberExpr, budget: Budget | None = None):
    return _cmp_series(f, g, ensure_budget(budget))


def _cmp_mono(m: Monomial, n: Monomial, b: Budget):
    if m == n:
        return EQUAL
    if not b.spend():
        return UNDECIDED
    if m.is_one():
        return LESS if shell_sign(n) > 0 else GREATER
    if n.is_one():
        return GREATER if shell_sign(m) > 0 else LESS
    if isinstance(m.tail, TNested) or isinstance(n.tail, TNested):
        return _cmp_with_nested(m, n, b)
    m_atom = m.psi.is_zero() and m.iota == 1
    n_atom = n.psi.is_zero() and n.iota == 1
    if m_atom and n_atom:
        return _cmp_atoms(m.tail, n.tail, b)
    return _cmp_series(mono_log(m), mono_log(n), b)


def _cmp_series(f: NumberExpr, g: NumberExpr, b: Budget):
    i = j = 0
    while i < len(f.terms) or j < len(g.terms):
        if i == len(f.terms):
            return -_sign(g.terms[j][0])
        if j == len(g.terms):
            return _sign(f.terms[i][0])
        (cf, mf), (cg, mg) = f.terms[i], g.terms[j]
        cm = _cmp_mono(mf, mg, b)
        if cm is UNDECIDED:
            return UNDECIDED
        if cm is GREATER:
            return _sign(cf)
        if cm is LESS:
            return -_sign(cg)
        if cf != cg:
            return _sign(cf - cg)
        i += 1
        j += 1
    return EQUAL


def _sign(q: Fraction) -> int:
    return GREATER if q > 0 else LESS


def _rev(c):
    if c is UNDECIDED:
        return UNDECIDED
    return -c


def _cmp_atoms(tm: Tail, tn: Tail, b: Budget):
    if isinstance(tm, TOmega) and isinstance(tn, TOmega):
        return _rev(ords.compare(tm.beta, tn.beta))
    if (
        isinstance(tm, THyper)
        and isinstance(tn, THyper)
        and ords.compare(tm.alpha, tn.alpha) is EQUAL
    ):
        cu = _cmp_series(tm.u, tn.u, b)
        if cu is UNDECIDED or cu is not EQUAL:
            return cu
        return _rev(ords.compare(tm.beta, tn.beta))
    # cross-strength: one exact hyperlog step on both sides, then recurse
    steps = [g for g in (_step_ord(tm), _step_ord(tn)) if g is not None]
    if not steps:
        return UNDECIDED
    gamma = min(steps)
    if not b.spend():
        return UNDECIDED
    ra = rewrite_L(gamma, atom_series(tm), b)
    rb = rewrite_L(gamma, atom_series(tn), b)
    if ra is None or rb is None:
        return UNDECIDED
    return _cmp_series(ra, rb, b)


def _step_ord(tail: Tail) -> Ordinal | None:
    """Strength whose hyperlog makes exact progress on this atom."""
    if isinstance(tail, TNested):
        return None
    if not tail.beta.is_zero():
        last_exp = tail.beta.cnf[-1][0]
        return ords.omega_power(ords.succ(last_exp))
    if isinstance(tail, THyper):
        return tail.alpha
    return None  # the atom is w itself


def _cmp_with_nested(m: Monomial, n: Monomial, b: Budget):
    """Compare via bounded prefix unfolding of registered nested atoms."""
    if b.nested_depth <= 0:
        return UNDECIDED
    from . import nested  # deferred: nested imports this module

    def resolve(x: Monomial) -> NumberExpr | None:
        if isinstance(x.tail, TNested) and x.psi.is_zero() and x.iota == 1:
            return nested.unfold_tail(x.tail, 1, b)
        if isinstance(x.tail, TNested):
            return None
        return NumberExpr(((Fraction(1), x),))

    b.nested_depth -= 1
    try:
        vm, vn = resolve(m), resolve(n)
        if vm is None or vn is None:
            return UNDECIDED
        return _cmp_series(vm, vn, b)
    finally:
        b.nested_depth += 1


# ---------------------------------------------------------------------------
# exact hyperlogarithm


def rewrite_L(gamma: Ordinal, a: NumberExpr, budget: Budget | None = None) -> NumberExpr | None:
    """Apply L_gamma exactly, or return None when no exact rule chain applies.

    Rules: index merging under the dominance side condition, the successor
    functional equation (which peels trailing CNF terms into integer
    shifts), inverse-pair unwrapping, absorption into hyperexponent
    arguments, and log of a shell.  No Taylor expansion is ever attempted.
    """
    _require_pos_infinite(a, "rewrite_L")
    b = ensure_budget(budget)
    cur = a
    for e, n in gamma.cnf:
        for _ in range(n):
            if cur is None or not b.spend():
                return None
            cur = _L_single(e, cur, b)
    return cur


def _L_single(e: Ordinal, f: NumberExpr, b: Budget) -> NumberExpr | None:
    """One exact application of L_{w^e}."""
    if len(f.terms) != 1 or f.terms[0][0] != 1:
        return None
    m = f.terms[0][1]
    if m.is_one() or isinstance(m.tail, TNested):
        return None
    if not (m.psi.is_zero() and m.iota == 1):
        return mono_log(m) if e.is_zero() else None
    delta = ords.omega_power(e)
    tail = m.tail
    if isinstance(tail, TOmega):
        hi, lo = ords.split_at(tail.beta, delta)
        if lo.is_zero():
            return atom_series(TOmega(ords.ord_sum(tail.beta, delta)))
        if e.is_successor():
            eta = ords.mu_minus(e)
            if len(lo.cnf) == 1 and ords.compare(lo.cnf[0][0], eta) is EQUAL:
                merged = atom(TOmega(ords.ord_sum(hi, delta)))
                return add_real(NumberExpr(((Fraction(1), merged),)), -lo.cnf[0][1])
        return None
    # THyper
    alpha, u = tail.alpha, tail.u
    if tail.beta.is_zero():
        c = ords.compare(delta, alpha)
        if c is EQUAL:
            return u
        if c is GREATER:
            if ords.compare(delta, ords.times_omega(alpha)) is EQUAL:
                inner = rewrite_L(delta, u, b)
                return None if inner is None else add_real(inner, 1)
            return None
    hi, lo = ords.split_at(tail.beta, delta)
    if lo.is_zero():
        nb = ords.ord_sum(tail.beta, delta)
        if ords.prec(nb, ords.alpha_over_omega(alpha)):
            return atom_series(THyper(nb, alpha, u))
        if (
            tail.beta.is_zero()
            and alpha.lead_exp().is_successor()
            and ords.compare(delta, ords.alpha_over_omega(alpha)) is EQUAL
        ):
            m2 = _E(alpha, add_real(u, -1), b)
            return None if m2 is None else NumberExpr(((Fraction(1), m2),))
        return None
    if e.is_successor():
        eta = ords.mu_minus(e)
        if len(lo.cnf) == 1 and ords.compare(lo.cnf[0][0], eta) is EQUAL:
            inner = _L_single(e, atom_series(THyper(hi, alpha, u)), b)
            return None if inner is None else add_real(inner, -lo.cnf[0][1])
    return None


# ---------------------------------------------------------------------------
# exact hyperexponential


def apply_E(alpha: Ordinal, a: NumberExpr, budget: Budget | None = None) -> Monomial | None:
    """E_alpha on the fragment: syntactic un-rewriting, tower bumps, or a
    fresh hyperexponent shell when the argument is alpha-truncated."""
    if not alpha.is_power_of_omega():
        raise ValueError("apply_E: alpha must be a power of w, alpha >= 1")
    _require_pos_infinite(a, "apply_E")
    b = ensure_budget(budget)
    return _E(alpha, a, b)


def _E(alpha: Ordinal, a: NumberExpr, b: Budget) -> Monomial | None:
    if not b.spend():
        return None
    mu = alpha.lead_exp()
    single = len(a.terms) == 1 and a.terms[0][0] == 1
    m = a.terms[0][1] if single else None
    if single and not m.is_one() and m.psi.is_zero() and m.iota == 1 and not isinstance(m.tail, TNested):
        # inverse pair: strip one trailing L_alpha
        rho = ords.strip_last(m.tail.beta, mu)
        if rho is not None:
            if isinstance(m.tail, TOmega):
                return atom(TOmega(rho))
            return atom(THyper(rho, m.tail.alpha, m.tail.u))
        # tower bump: E_alpha of an (alpha*w)-atomic monomial climbs a level
        alpha_w = ords.omega_power(ords.succ(mu))
        if is_atomic_monomial(m, alpha_w):
            w = rewrite_L(alpha_w, a, b)
            if w is None:
                return None
            return _E(alpha_w, add_real(w, 1), b)
    # functional-equation inverse: E_alpha^(v - n) = L_{alpha/w * n} E_alpha^v
    if (
        mu.is_successor()
        and len(a.terms) == 2
        and a.terms[0][0] == 1
        and a.terms[1][1].is_one()
        and a.terms[1][0] < 0
        and a.terms[1][0].denominator == 1
    ):
        inner = _E(alpha, NumberExpr(a.terms[:1], a.exact), b)
        if inner is None:
            return None
        n = -int(a.terms[1][0])
        shift = Ordinal(((ords.mu_minus(mu), n),))
        r = rewrite_L(shift, NumberExpr(((Fraction(1), inner),)), b)
        if r is not None and len(r.terms) == 1 and r.terms[0][0] == 1:
            return r.terms[0][1]
        return None
    if alpha == ORD1:
        if not is_purely_large(a):
            return None
        ta = tail_atomic_split(a)
        if ta is None:
            return Monomial(ZERO_EXPR, 1, THyper(ORD0, ORD1, a))
        psi, i0, a0 = ta
        core = _exp_atom(a0, b)
        if core is None:
            return None
        return Monomial(psi, i0, core.tail)
    if _is_truncated(a, alpha, b) == 1:
        return Monomial(ZERO_EXPR, 1, THyper(ORD0, alpha, a))
    return None


def _exp_atom(a0: Monomial, b: Budget) -> Monomial | None:
    """exp of a log-atomic atom: decrement a trailing finite log, else bump."""
    tail = a0.tail
    if isinstance(tail, TNested):
        return None
    rho = ords.strip_last(tail.beta, ORD0)
    if rho is not None:
        if isinstance(tail, TOmega):
            return atom(TOmega(rho))
        return atom(THyper(rho, tail.alpha, tail.u))
    w = rewrite_L(OMEGA, NumberExpr(((Fraction(1), a0),)), b)
    if w is None:
        return None
    return _E(OMEGA, add_real(w, 1), b)


def exp_purely_large(phi: NumberExpr, budget: Budget | None = None) -> Monomial:
    """exp on purely large arguments (total on the fragment); 1 for 0."""
    b = ensure_budget(budget)
    if phi.is_zero():
        return MONO_ONE
    if not is_purely_large(phi):
        raise StuckError("exp needs a purely large (or zero) argument")
    if phi.terms[0][0] < 0:
        return mono_inv(exp_purely_large(neg(phi), b))
    m = _E(ORD1, phi, b)
    if m is None:
        raise StuckError("exp: no exact normal form for this argument")
    return m


def mono_mul(m: Monomial, n: Monomial, budget: Budget | None = None) -> Monomial:
    """Product of monomials via exp of the summed logs (exact)."""
    if m.is_one():
        return n
    if n.is_one():
        return m
    if isinstance(m.tail, TNested) or isinstance(n.tail, TNested):
        raise StuckError("products of nested atoms are outside the fragment")
    b = ensure_budget(budget)
    return exp_purely_large(add(mono_log(m), mono_log(n), b), b)


# ---------------------------------------------------------------------------
# beta-truncatedness (three-valued) on the fragment


def _is_truncated(f: NumberExpr, beta: Ordinal, b: Budget) -> int:
    """1 = yes, -1 = no, 0 = unknown; f positive infinite, beta a power of w."""
    if beta == ORD1:
        return 1 if is_purely_large(f) else -1
    small = [m for _, m in f.terms if mono_class(m) < 0]
    if not small:
        return 1
    verdict = 1
    for m in small:
        got = 0
        inv = NumberExpr(((Fraction(1), mono_inv(m)),))
        for gamma_steps in range(3):
            arg = inv
            ok = True
            for _ in range(gamma_steps):
                e = _E(ORD1, arg, b) if is_purely_large(arg) else None
                if e is None:
                    ok = False
                    break
                arg = NumberExpr(((Fraction(1), e),))
            if not ok:
                continue
            bound = rewrite_L(beta, arg, b)
            if bound is None:
                continue
            c = _cmp_series(f, bound, b)
            if c is LESS and gamma_steps == 0:
                got = 1  # the gamma = 0 bound is the tightest one
                break
            if c in (EQUAL, GREATER):
                return -1
        if got != 1:
            verdict = 0
    return verdict


def is_truncated(f: NumberExpr, beta: Ordinal, budget: Budget | None = None) -> int:
    if not beta.is_power_of_omega():
        raise ValueError("beta must be a power of w")
    _require_pos_infinite(f, "is_truncated")
    return _is_truncated(f, beta, ensure_budget(budget))


def sharp(f: NumberExpr, beta: Ordinal, budget: Budget | None = None) -> NumberExpr | None:
    """Maximal truncation of f that is beta-truncated; None when undecidable."""
    if not beta.is_power_of_omega():
        raise ValueError("beta must be a power of w")
    _require_pos_infinite(f, "sharp")
    b = ensure_budget(budget)
    for k in range(len(f.terms), 0, -1):
        g = NumberExpr(f.terms[:k], f.exact)
        if not is_positive_infinite(g):
            continue
        t = _is_truncated(g, beta, b)
        if t == 1:
            return g
        if t == 0:
            return None
    return None


# ---------------------------------------------------------------------------
# normalization


def normalize(e: NumberExpr, budget: Budget | None = None) -> NumberExpr:
    """Drive every monomial to its unique expansion normal form; idempotent.

    Raises NormalizationUndecided when term sorting hits an undecidable
    pair, StuckError when a shell cannot be recanonicalized exactly.
    """
    b = ensure_budget(budget)
    pairs = []
    for c, m in e.terms:
        pairs.append((c, _normalize_mono(m, b)))
    return nexpr(pairs, e.exact, None)


def _normalize_mono(m: Monomial, b: Budget) -> Monomial:
    if m.is_one():
        return m
    if isinstance(m.tail, TNested):
        return Monomial(normalize(m.psi, b), m.iota, m.tail)
    psi = normalize(m.psi, b)
    tail = m.tail
    if isinstance(tail, THyper):
        # recanonicalize the atom: E on the normalized argument, then the L-prefix
        inner = _E(tail.alpha, normalize(tail.u, b), b)
        if inner is None:
            raise StuckError(f"normalize: E_[{tail.alpha}] stuck on its argument")
        shifted = _unit(inner)
        if not tail.beta.is_zero():
            shifted = rewrite_L(tail.beta, shifted, b)
        if shifted is None or len(shifted.terms) != 1 or shifted.terms[0][0] != 1:
            raise StuckError("normalize: atom did not stay a monomial")
        core_mono = shifted.terms[0][1]
    else:
        core_mono = atom(tail)
    if psi.is_zero() and m.iota == 1:
        return core_mono
    return exp_purely_large(add(psi, scale(m.iota, mono_log(core_mono)), b), b)


def _unit(m: Monomial) -> NumberExpr:
    return NumberExpr(((Fraction(1), m),))
