"""Current doubles of Zamolodchikov-Faddeev type: mode-level rewriting,
truncated Fock modules, and exact verification of the spectral L-identity.

Mode conventions.  Creation currents expand as x_i(u) = sum_m x_i[m]
u^(-m-1); dual currents are indexed so that the pairing with a creation
mode fires exactly at k + l = 1, which puts x^j(u) = sum_k x^j[k] u^(1-k).
With delta(u - v) = sum_p v^p u^(-p-1) and the region |u| > |v| fixed for
1/(u - v) = sum_{p>=0} v^p u^(-p-1), the mode permutation rule

    x^a[k] x_b[l]  =  q^{-1} x_i[l] x^j[k] Psi_jb^ia  +  B_b^a delta_{k+l,1}

is the coefficient form of the distribution-level exchange.  Exchange
terms keep both mode labels, so annihilation never manufactures new modes
and every matrix element between finite states is a finite sum.

The spectral L-identity is verified through matrix elements on truncated
modules.  The two pole terms of the identity each multiply a delta-bearing
exchange remainder; those ill-defined products cancel pairwise, which is
realized here by substituting the middle exchange symbolically before any
series expansion: what remains of the pole side is a sum of four-factor
current words in which annihilators only ever meet ket modes, so its pole
summation terminates on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .braidings import (
    Braiding,
    CurrentBraiding,
    TRIGONOMETRIC,
    dual_square_grid,
    spectral_braid_certificate,
    unitarity_certificate,
)
from .errors import WindowOverflow
from .scalars import ONE, Q, QINV, ZERO, Scalar
from .tensorops import enc_index

Mode = tuple[int, int]               # (generator index, mode number)
ModeWord = tuple[Mode, ...]


@dataclass
class ModeState:
    """A finite combination of creation-mode words over a mode window."""

    terms: dict[ModeWord, Scalar]
    window: int

    def __post_init__(self):
        self.terms = {w: c for w, c in self.terms.items() if not c.is_zero()}
        for w in self.terms:
            for (_, m) in w:
                if abs(m) > self.window:
                    raise WindowOverflow(
                        f"mode {m} outside window {self.window}", abs(m))

    @staticmethod
    def vacuum(window: int) -> "ModeState":
        return ModeState({(): ONE}, window)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ModeState") -> "ModeState":
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, ZERO) + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return ModeState(out, max(self.window, other.window))

    def scale(self, s: Scalar) -> "ModeState":
        return ModeState({w: s * c for w, c in self.terms.items()}, self.window)

    def __eq__(self, other):
        if not isinstance(other, ModeState):
            return NotImplemented
        return self.terms == other.terms


@dataclass
class CurrentDouble:
    """The mode-level double built on a Baxterized constant braiding."""

    cb: CurrentBraiding
    window: int
    max_degree: int = 2
    exchange: dict = field(init=False)
    constant: dict = field(init=False)

    def __post_init__(self):
        b = self.cb.base
        N = b.N
        psi = b.psi
        s = b.q.inverse()
        exch = {}
        const = {}
        for a in range(N):
            for bb in range(N):
                moves = []
                for i in range(N):
                    for j in range(N):
                        c = psi.entries[enc_index((i, a), N)][enc_index((j, bb), N)]
                        if not c.is_zero():
                            moves.append((i, j, s * c))
                exch[(a, bb)] = moves
                const[(a, bb)] = b.B[bb][a]
        self.exchange = exch
        self.constant = const

    @property
    def N(self) -> int:
        return self.cb.base.N


def make_current_double(cb: CurrentBraiding, window: int,
                        max_degree: int = 2) -> CurrentDouble:
    return CurrentDouble(cb, window, max_degree)


# ---------------------------------------------------------------------------
# mode-level rewriting
# ---------------------------------------------------------------------------

def mode_permute(cd: CurrentDouble, a_mode: Mode, b_mode: Mode):
    """Normal-ordered form of x^a[k] x_b[l]: a list of (pair, coefficient)
    where pair is ((i, l), (j, k)) for exchange terms and None for the
    pairing constant, which fires exactly when k + l = 1."""
    (a, k) = a_mode
    (b, l) = b_mode
    out = [((((i, l)), ((j, k))), c) for (i, j, c) in cd.exchange[(a, b)]]
    if k + l == 1:
        c = cd.constant[(a, b)]
        if not c.is_zero():
            out.append((None, c))
    return out


def _annihilate(cd: CurrentDouble, gen: int, k: int, word: ModeWord) -> dict[ModeWord, Scalar]:
    """Action of the single dual mode x^gen[k] on a creation word; the
    counit kills whatever reaches the vacuum."""
    if not word:
        return {}
    (b0, m0) = word[0]
    out: dict[ModeWord, Scalar] = {}
    if k + m0 == 1:
        c = cd.constant[(gen, b0)]
        if not c.is_zero():
            out[word[1:]] = c
    for (i, j, c) in cd.exchange[(gen, b0)]:
        for w2, c2 in _annihilate(cd, j, k, word[1:]).items():
            key = ((i, m0),) + w2
            s = out.get(key, ZERO) + c * c2
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return out


def zf_act(cd: CurrentDouble, a_modes, state: ModeState) -> ModeState:
    """Act with a word of dual modes on a state, rightmost mode first."""
    if isinstance(a_modes, tuple) and a_modes and isinstance(a_modes[0], int):
        a_modes = [a_modes]
    terms = dict(state.terms)
    for (gen, k) in reversed(list(a_modes)):
        new: dict[ModeWord, Scalar] = {}
        for w, c in terms.items():
            for w2, c2 in _annihilate(cd, gen, k, w).items():
                s = new.get(w2, ZERO) + c * c2
                if s.is_zero():
                    new.pop(w2, None)
                else:
                    new[w2] = s
        terms = new
    return ModeState(terms, state.window)


# ---------------------------------------------------------------------------
# expression evaluation for the spectral identity
# ---------------------------------------------------------------------------
# A term is (coefficient, factors, dist): factors are current symbols
# ('c'|'a', generator, 'u'|'v') multiplied in written order; dist is None,
# "delta" for a delta(u-v) prefactor, or "pole" applied at extraction.

Factor = tuple[str, int, str]
Term = tuple[Scalar, tuple[Factor, ...], str | None]
ExpDict = dict[tuple[int, int], dict[ModeWord, Scalar]]


def _exp_shift(kind: str, mode: int) -> int:
    # creation x_i[m] sits at u^(-m-1); dual x^j[k] sits at u^(1-k)
    return -mode - 1 if kind == "c" else 1 - mode


def _eval_factors(cd: CurrentDouble, factors: tuple[Factor, ...],
                  ket: ModeWord, interior_clip: int) -> ExpDict:
    """Apply current factors to a ket, rightmost first, tracking the
    (u, v)-exponents.  Creation modes are enumerated within interior_clip;
    final states are truncated to the declared window at extraction."""
    current: ExpDict = {(0, 0): {ket: ONE}}
    for (kind, gen, var) in reversed(factors):
        new: ExpDict = {}
        for (eu, ev), states in current.items():
            for word, coeff in states.items():
                if kind == "a":
                    candidates = {1 - m for (_, m) in word}
                    for k in candidates:
                        shift = _exp_shift("a", k)
                        key = (eu + shift, ev) if var == "u" else (eu, ev + shift)
                        acted = _annihilate(cd, gen, k, word)
                        if not acted:
                            continue
                        slot = new.setdefault(key, {})
                        for w2, c2 in acted.items():
                            s = slot.get(w2, ZERO) + coeff * c2
                            if s.is_zero():
                                slot.pop(w2, None)
                            else:
                                slot[w2] = s
                else:
                    for m in range(-interior_clip, interior_clip + 1):
                        shift = _exp_shift("c", m)
                        key = (eu + shift, ev) if var == "u" else (eu, ev + shift)
                        slot = new.setdefault(key, {})
                        w2 = ((gen, m),) + word
                        s = slot.get(w2, ZERO) + coeff
                        if s.is_zero():
                            slot.pop(w2, None)
                        else:
                            slot[w2] = s
        current = {k: v for k, v in new.items() if v}
    return current


def _project_window(states: dict[ModeWord, Scalar], window: int) -> dict[ModeWord, Scalar]:
    return {w: c for w, c in states.items()
            if all(abs(m) <= window for (_, m) in w)}


class _EvaluatedTerm:
    __slots__ = ("coeff", "dist", "exps")

    def __init__(self, coeff: Scalar, dist: str | None, exps: ExpDict):
        self.coeff = coeff
        self.dist = dist
        self.exps = exps


def _extract(cd: CurrentDouble, ev_terms: list[_EvaluatedTerm],
             eu: int, ev: int, apply_pole: bool) -> dict[ModeWord, Scalar]:
    """Coefficient of u^eu v^ev of a sum of evaluated terms, projected to
    the declared window.  delta prefactors sum over their diagonal; the
    pole prefactor sums over the region expansion."""
    window = cd.window
    trig = cd.cb.flavor == TRIGONOMETRIC
    qdiff = Q - QINV
    out: dict[ModeWord, Scalar] = {}

    def add_states(states, scale):
        for w, c in _project_window(states, window).items():
            s = out.get(w, ZERO) + scale * c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s

    for term in ev_terms:
        targets: list[tuple[int, int, Scalar]] = []
        if apply_pole:
            # h(u,v) = sum_{p>=0} v^p u^{-p-1} (rational)
            #        = (q - q^{-1}) sum_{p>=0} v^p u^{-p} (trigonometric)
            pole_coeff = qdiff if trig else ONE
            offsets = {a - (eu + (0 if trig else 1)) for (a, _) in term.exps}
            for p in sorted(offsets):
                if p < 0:
                    continue
                ua = eu + p + (0 if trig else 1)
                targets.append((ua, ev - p, pole_coeff))
        else:
            targets.append((eu, ev, ONE))
        for (ua, va, scale0) in targets:
            if term.dist is None:
                states = term.exps.get((ua, va))
                if states:
                    add_states(states, term.coeff * scale0)
            elif term.dist == "delta":
                # delta(u-v) contributes v^p u^{-p-1} for every integer p
                for (a, b), states in term.exps.items():
                    p = va - b
                    if a == ua + p + 1:
                        add_states(states, term.coeff * scale0)
            else:
                raise AssertionError("pole terms are consumed at extraction")
    return out


# ---------------------------------------------------------------------------
# expression assembly for the spectral L-identity
# ---------------------------------------------------------------------------

def _expr_mul(a, b, n):
    out = []
    for x in range(n):
        row = []
        for y in range(n):
            acc: list[Term] = []
            for z in range(n):
                for (c1, f1, d1) in a[x][z]:
                    for (c2, f2, d2) in b[z][y]:
                        if d1 is not None and d2 is not None:
                            raise AssertionError("product of two distributions")
                        acc.append((c1 * c2, f1 + f2, d1 or d2))
            row.append(acc)
        out.append(row)
    return out


def _expr_scale(mat, s: Scalar, dist: str | None = None):
    out = []
    for row in mat:
        new_row = []
        for terms in row:
            cell = []
            for (c, f, d) in terms:
                if dist is not None and d is not None:
                    raise AssertionError("distribution already present")
                cell.append((s * c, f, d or dist))
            new_row.append(cell)
        out.append(new_row)
    return out


def _expr_sub(a, b):
    return [[ta + [(-c, f, d) for (c, f, d) in tb] for ta, tb in zip(ra, rb)]
            for ra, rb in zip(a, b)]


def _written_r(b: Braiding):
    n2 = b.N * b.N
    return [[[(b.R.entries[y][x], (), None)] if not b.R.entries[y][x].is_zero() else []
             for y in range(n2)] for x in range(n2)]


def _l_current(b: Braiding, var: str):
    N = b.N
    n2 = N * N
    out = [[[] for _ in range(n2)] for _ in range(n2)]
    for x1 in range(N):
        for x2 in range(N):
            for y1 in range(N):
                out[enc_index((x1, x2), N)][enc_index((y1, x2), N)] = \
                    [(ONE, (("c", x1, var), ("a", y1, var)), None)]
    return out


def _yang_expressions(cd: CurrentDouble):
    """The pole-free rearrangement of the spectral identity.

    T1 collects the constant-R side: R12 L1(u) R12 L1(v) - L1(v) R12 L1(u)
    R12 - (R12 L1(u) - L1(u) R12) delta(u-v).  T2 is the exchange residue
    of L1(u) R12 L1(v) - L1(v) R12 L1(u): its middle annihilator-creator
    pair is replaced by its exchange image (the delta part of that pair is
    what cancels against the ill-defined pole-delta products), so T1 must
    equal pole * T2 on every matrix element.
    """
    b = cd.cb.base
    N = b.N
    n2 = N * N
    rw = _written_r(b)
    lu = _l_current(b, "u")
    lv = _l_current(b, "v")
    t1 = _expr_sub(_expr_mul(_expr_mul(_expr_mul(rw, lu, n2), rw, n2), lv, n2),
                   _expr_mul(_expr_mul(_expr_mul(lv, rw, n2), lu, n2), rw, n2))
    t1 = _expr_sub(t1, _expr_scale(
        _expr_sub(_expr_mul(rw, lu, n2), _expr_mul(lu, rw, n2)), ONE, "delta"))

    s = b.q.inverse()
    psi = b.psi
    t2 = [[[] for _ in range(n2)] for _ in range(n2)]
    for x1 in range(N):
        for x2 in range(N):
            x = enc_index((x1, x2), N)
            for y1 in range(N):
                for y2 in range(N):
                    y = enc_index((y1, y2), N)
                    cell = t2[x][y]
                    for z in range(N):
                        for w in range(N):
                            rv = b.R.entries[enc_index((w, y2), N)][enc_index((z, x2), N)]
                            if rv.is_zero():
                                continue
                            for i in range(N):
                                for j in range(N):
                                    pv = psi.entries[enc_index((i, z), N)][enc_index((j, w), N)]
                                    if pv.is_zero():
                                        continue
                                    coeff = s * rv * pv
                                    cell.append((coeff,
                                                 (("c", x1, "u"), ("c", i, "v"),
                                                  ("a", j, "u"), ("a", y1, "v")),
                                                 None))
                                    cell.append((-coeff,
                                                 (("c", x1, "v"), ("c", i, "u"),
                                                  ("a", j, "v"), ("a", y1, "u")),
                                                 None))
    return t1, t2


def _kets(N: int, window: int, degree: int) -> list[ModeWord]:
    singles = [((g, m),) for g in range(N) for m in range(-window, window + 1)]
    kets: list[ModeWord] = [()]
    kets.extend(singles)
    if degree >= 2:
        for w1 in singles:
            for w2 in singles:
                kets.append(w1 + w2)
    return kets


def _exchange_relation_span(cd: CurrentDouble, far: int):
    """Row-reduced span of the window projections of the defining exchange
    relations on two-mode words, collected from relation instances with
    coefficients up to `far`.  Saturation is not derived from a bound; the
    caller compares ranks at two values of `far` and refuses to proceed if
    the span is still growing."""
    from .tensorops import row_reduce

    b = cd.cb.base
    N = b.N
    M = cd.window
    trig = cd.cb.flavor == TRIGONOMETRIC
    qdiff = Q - QINV
    theta = 0 if trig else 1
    cf = qdiff if trig else ONE
    qmain = Q if trig else ONE
    pairs = [((i, a), (j, b2)) for i in range(N) for a in range(-M, M + 1)
             for j in range(N) for b2 in range(-M, M + 1)]
    index = {p: t for t, p in enumerate(pairs)}
    rows = []
    for m in range(-far, far + 1):
        for n in range(-far, far + 1):
            for i in range(N):
                for j in range(N):
                    row = [ZERO] * len(pairs)
                    touched = False

                    def add(k1: Mode, k2: Mode, c: Scalar):
                        nonlocal touched
                        t = index.get((k1, k2))
                        if t is not None and not c.is_zero():
                            row[t] = row[t] + c
                            touched = True

                    for k in range(N):
                        for l in range(N):
                            rv = b.R.entries[enc_index((k, l), N)][enc_index((i, j), N)]
                            add((k, m), (l, n), rv)
                    for p in range(0, far + 2 * M + 2):
                        add((i, m - p - theta), (j, n + p), -cf)
                        add((i, n + p), (j, m - p - theta), cf)
                    add((i, n), (j, m), -qmain)
                    if touched:
                        rows.append(row)
    return row_reduce(rows, len(pairs)), index


def _reduce_mod_span(states: dict[ModeWord, Scalar], span, index) -> dict[ModeWord, Scalar]:
    """Remainder of a two-mode-word combination modulo the relation span;
    words of other degrees pass through untouched."""
    vec = [ZERO] * span.ncols
    out = {w: c for w, c in states.items() if len(w) != 2}
    for w, c in states.items():
        if len(w) == 2:
            t = index.get((w[0], w[1]))
            if t is None:
                out[w] = c
            else:
                vec[t] = vec[t] + c
    for prow, pcol in zip(span.rows, span.pivots):
        f = vec[pcol]
        if not f.is_zero():
            vec = [a - f * bb for a, bb in zip(vec, prow)]
    inv_index = {t: p for p, t in index.items()}
    for t, c in enumerate(vec):
        if not c.is_zero():
            w = inv_index[t]
            s = out.get(w, ZERO) + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
    return out


def verify_yang(cd: CurrentDouble, window: int | None = None,
                degree: int = 1, spot_enlarge: bool = True) -> dict:
    """Exact matrix-element verification of the spectral L-identity.

    Both sides are expanded in the region |u| > |v|; the coefficient of
    u^{-r-1} v^{-s-1} applied to every ket of degree <= `degree` with
    modes in the window is compared for all r, s in the window.  Degree
    <= 1 comparisons are strict equalities of free mode states.  Outputs
    reached from degree-2 kets are only defined up to the defining
    exchange relations, so those comparisons reduce both sides modulo the
    window projection of the relation span first; the report records
    which comparison was used.  Verdicts are window-monotone; with
    spot_enlarge the interior mode enumeration is repeated with a larger
    clip and must agree.
    """
    if degree > 2 or (window or cd.window) > 4:
        raise WindowOverflow("desk scale is degree <= 2 and window <= 4")
    M = cd.window if window is None else window
    if M != cd.window:
        cd = CurrentDouble(cd.cb, M, cd.max_degree)
    N = cd.N
    n2 = N * N
    t1, t2 = _yang_expressions(cd)
    interior = 2 * M + 2
    kets = _kets(N, M, degree)
    span = index = None
    if degree >= 2:
        span, index = _exchange_relation_span(cd, far=3 * M + 3)
        span_big, _ = _exchange_relation_span(cd, far=3 * M + 5)
        if span.rank != span_big.rank:
            raise WindowOverflow("relation span did not stabilize", 3 * M + 5)
    mismatches = []
    residual_classes = 0
    checked = 0
    for ket in kets:
        deg2_ket = len(ket) >= 2
        for x in range(n2):
            for y in range(n2):
                ev1 = [_EvaluatedTerm(c, d, _eval_factors(cd, f, ket, interior))
                       for (c, f, d) in t1[x][y]]
                ev2 = [_EvaluatedTerm(c, d, _eval_factors(cd, f, ket, M))
                       for (c, f, d) in t2[x][y]]
                for r in range(-M, M + 1):
                    for s in range(-M, M + 1):
                        eu, ev = -r - 1, -s - 1
                        lhs = _extract(cd, ev1, eu, ev, apply_pole=False)
                        rhs = _extract(cd, ev2, eu, ev, apply_pole=True)
                        if deg2_ket and span is not None:
                            lhs = _reduce_mod_span(lhs, span, index)
                            rhs = _reduce_mod_span(rhs, span, index)
                        checked += 1
                        if lhs != rhs:
                            if deg2_ket:
                                residual_classes += 1
                            else:
                                mismatches.append((ket, (x, y), (r, s)))
    report = {
        "passed": not mismatches,
        "matrix_elements": checked,
        "kets": len(kets),
        "window": M,
        "degree": degree,
        "comparison": "strict (degree <= 1)" if degree <= 1 else
        "strict on degree <= 1 kets; degree-2 kets modulo the creation-side "
        "relation span (report-only: free-module elements are defined only "
        "up to the defining ideals there)",
        "mismatches": mismatches[:10],
    }
    if degree >= 2:
        report["degree2_report_only"] = True
        report["degree2_residual_classes"] = residual_classes
    if spot_enlarge and not mismatches:
        ket = kets[min(1, len(kets) - 1)]
        stable = True
        for x in range(n2):
            ev1 = [_EvaluatedTerm(c, d, _eval_factors(cd, f, ket, interior))
                   for (c, f, d) in t1[x][0]]
            ev1_big = [_EvaluatedTerm(c, d, _eval_factors(cd, f, ket, interior + 3))
                       for (c, f, d) in t1[x][0]]
            for r in range(-M, M + 1):
                for s in range(-M, M + 1):
                    a = _extract(cd, ev1, -r - 1, -s - 1, apply_pole=False)
                    b2 = _extract(cd, ev1_big, -r - 1, -s - 1, apply_pole=False)
                    if a != b2:
                        stable = False
        report["window_monotone_spot_check"] = stable
        if not stable:
            report["passed"] = False
            raise WindowOverflow(
                "interior mode window too small; enlarge the window",
                interior + 3)
    return report


# ---------------------------------------------------------------------------
# defining-relation reports
# ---------------------------------------------------------------------------

def current_relation_check(cd: CurrentDouble, which: str) -> dict:
    """Consistency reports for the defining current relations.

    b-side and a-side: the pairwise and triple reorderings of the relation
    system are consistent iff the normalized spectral braiding is
    involutive and satisfies the spectral braid relation; both are
    certified exactly by the degree-bound grid method (on the dual-square
    transport of R for the a-side).  half-currents: the four mode-sector
    expansions must partition the full current relation exactly on the
    window, with every residual term carrying a mode outside it
    (report-only).
    """
    if which == "b-side":
        braid = spectral_braid_certificate(cd.cb)
        unit = unitarity_certificate(cd.cb)
        return {"which": which, "passed": braid["passed"] and unit["passed"],
                "braid": braid, "unitarity": unit}
    if which == "a-side":
        base = cd.cb.base
        dual = Braiding(base.N, dual_square_grid(base), base.kind,
                        series=base.series, mu=base.mu, q=base.q,
                        name=f"dual({base.name})")
        dual_cb = CurrentBraiding(dual, cd.cb.flavor)
        braid = spectral_braid_certificate(dual_cb)
        unit = unitarity_certificate(dual_cb)
        return {"which": which, "passed": braid["passed"] and unit["passed"],
                "braid": braid, "unitarity": unit}
    if which == "half-currents":
        return _half_current_report(cd)
    raise ValueError(f"unknown relation family {which!r}")


def _half_current_report(cd: CurrentDouble) -> dict:
    """Truncation bookkeeping for the half-current sector relations."""
    b = cd.cb.base
    N = b.N
    M = cd.window
    trig = cd.cb.flavor == TRIGONOMETRIC
    qdiff = Q - QINV
    q = b.q

    def sector(mode: int) -> str:
        return "+" if mode < 0 else "-"

    total_residual = 0
    in_window_ok = True
    for m in range(-M, M + 1):
        for n in range(-M, M + 1):
            for i in range(N):
                for j in range(N):
                    # full relation at the (m, n) coefficient:
                    # terms as {( (gen,mode), (gen,mode) ): Scalar}
                    full: dict[tuple[Mode, Mode], Scalar] = {}

                    def add(k1: Mode, k2: Mode, c: Scalar):
                        nonlocal total_residual
                        if c.is_zero():
                            return
                        if abs(k1[1]) > M or abs(k2[1]) > M:
                            total_residual += 1
                            return
                        key = (k1, k2)
                        s = full.get(key, ZERO) + c
                        if s.is_zero():
                            full.pop(key, None)
                        else:
                            full[key] = s

                    # R-side: R_ij^kl x_k[m] x_l[n] minus the pole tail
                    for k in range(N):
                        for l in range(N):
                            rv = b.R.entries[enc_index((k, l), N)][enc_index((i, j), N)]
                            add((k, m), (l, n), rv)
                    for p in range(0, 2 * M + 2):
                        mu_ = m - p if trig else m - p - 1
                        cf = qdiff if trig else ONE
                        add((i, mu_), (j, n + p), -cf)
                    # g-side: main term and its pole tail, subtracted
                    add((i, n), (j, m), -(q if not trig else Q))
                    for p in range(0, 2 * M + 2):
                        mu_ = m - p if trig else m - p - 1
                        cf = qdiff if trig else ONE
                        add((i, n + p), (j, mu_), cf)

                    # sector decomposition must partition the same terms
                    sectors: dict[tuple[str, str], dict] = {}
                    for (k1, k2), c in full.items():
                        tag = (sector(k1[1]), sector(k2[1]))
                        slot = sectors.setdefault(tag, {})
                        slot[(k1, k2)] = slot.get((k1, k2), ZERO) + c
                    merged: dict[tuple[Mode, Mode], Scalar] = {}
                    for slot in sectors.values():
                        for k, c in slot.items():
                            merged[k] = merged.get(k, ZERO) + c
                    merged = {k: c for k, c in merged.items() if not c.is_zero()}
                    if merged != full:
                        in_window_ok = False
    return {
        "which": "half-currents",
        "passed": in_window_ok,
        "report_only": True,
        "window": M,
        "residual_out_of_window_terms": total_residual,
    }
