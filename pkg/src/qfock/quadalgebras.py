"""R-symmetric and R-skew-symmetric algebras of V and V*, materialized
degree by degree.

A quotient of the free tensor algebra by a quadratic relation subspace is
built iteratively: the degree-k candidates are (degree k-1 basis word,
generator) pairs, and the only new relations to impose are the quadratic
ones placed on the last two slots, pushed through the degree k-1
projection.  Pivots are chosen on the lexicographically largest words, so
the surviving basis consists of the lexicographically earliest free words.

Degree caches grow monotonically; every computed component stores its
basis and the reduction of every non-basis candidate word, from which the
projection of an arbitrary free tensor is assembled recursively.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .braidings import BMW, HECKE, INVOLUTIVE, Braiding, dual_square_grid
from .errors import SpaceMismatch, UnsupportedConstruction
from .scalars import ONE, Q, ZERO, Scalar
from .tensorops import LinOperator, kernel_image, row_reduce

Word = tuple[int, ...]
Tensor = dict[Word, Scalar]

SYM = "sym"
LAMBDA = "lambda"


@dataclass
class Component:
    degree: int
    basis: list[Word]
    basis_index: dict[Word, int]
    # reduction of every non-basis candidate (prefix-basis-word + generator)
    reduction: dict[Word, Tensor] = field(default_factory=dict)


class GradedQuotient:
    """A quadratic quotient of T(V) or T(V*) with per-degree bases."""

    def __init__(self, N: int, space: str, kind: str,
                 relations: list[Tensor], name: str = ""):
        self.N = N
        self.space = space
        self.kind = kind
        self.relations = relations
        self.name = name
        self._components: dict[int, Component] = {}
        self._nf_cache: dict[Word, Tensor] = {}

    # -- components -----------------------------------------------------

    def component(self, k: int) -> Component:
        if k < 0:
            raise ValueError("degree must be nonnegative")
        got = self._components.get(k)
        if got is not None:
            return got
        if k == 0:
            comp = Component(0, [()], {(): 0})
        elif k == 1:
            basis = [(i,) for i in range(self.N)]
            comp = Component(1, basis, {w: i for i, w in enumerate(basis)})
        else:
            comp = self._build_component(k)
        self._components[k] = comp
        return comp

    def _build_component(self, k: int) -> Component:
        prev = self.component(k - 1)
        below = self.component(k - 2)
        candidates = [w + (g,) for w in prev.basis for g in range(self.N)]
        candidates.sort()
        col_of = {w: i for i, w in enumerate(candidates)}
        ncols = len(candidates)
        rows = []
        for w2 in below.basis:
            for rel in self.relations:
                row = [ZERO] * ncols
                touched = False
                for (i, j), c in rel.items():
                    for y, d in self.normal_form_word(w2 + (i,)).items():
                        col = col_of[y + (j,)]
                        row[col] = row[col] + c * d
                        touched = True
                if touched:
                    rows.append(row)
        red = row_reduce(rows, ncols, col_order=list(range(ncols - 1, -1, -1)))
        pivot_set = set(red.pivots)
        basis = [w for i, w in enumerate(candidates) if i not in pivot_set]
        comp = Component(k, basis, {w: i for i, w in enumerate(basis)})
        for prow, pcol in zip(red.rows, red.pivots):
            expr: Tensor = {}
            for col, coeff in enumerate(prow):
                if col != pcol and not coeff.is_zero():
                    expr[candidates[col]] = -coeff
            comp.reduction[candidates[pcol]] = expr
        return comp

    # -- projection -------------------------------------------------------

    def normal_form_word(self, word: Word) -> Tensor:
        """Coordinates of a free word in the reduced basis of its degree."""
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        k = len(word)
        comp = self.component(k)
        if word in comp.basis_index:
            out = {word: ONE}
        elif k < 2:
            out = {word: ONE}
        else:
            prefix_nf = self.normal_form_word(word[:-1])
            g = word[-1]
            acc: Tensor = {}
            for y, c in prefix_nf.items():
                cand = y + (g,)
                if cand in comp.basis_index:
                    _accumulate(acc, cand, c)
                else:
                    for w2, d in comp.reduction[cand].items():
                        _accumulate(acc, w2, c * d)
            out = acc
        self._nf_cache[word] = out
        return out

    def normal_form(self, tensor: Tensor | Word, space: str | None = None) -> Tensor:
        """Project a homogeneous free tensor onto the component basis."""
        if space is not None and space != self.space:
            raise SpaceMismatch(
                f"cannot reduce a {space} word in a {self.space} algebra")
        if isinstance(tensor, tuple):
            tensor = {tensor: ONE}
        if not tensor:
            return {}
        degrees = {len(w) for w in tensor}
        if len(degrees) != 1:
            raise ValueError("tensor must be homogeneous")
        out: Tensor = {}
        for word, coeff in tensor.items():
            if coeff.is_zero():
                continue
            for w2, d in self.normal_form_word(word).items():
                _accumulate(out, w2, coeff * d)
        return out

    def dim(self, k: int) -> int:
        return len(self.component(k).basis)

    def poincare(self, kmax: int) -> list[int]:
        return [self.dim(k) for k in range(kmax + 1)]

    def __repr__(self) -> str:
        return f"GradedQuotient({self.name or self.kind}, N={self.N}, {self.space})"


def _accumulate(acc: Tensor, word: Word, coeff: Scalar):
    s = acc.get(word, ZERO) + coeff
    if s.is_zero():
        acc.pop(word, None)
    else:
        acc[word] = s


# ---------------------------------------------------------------------------
# construction from a braiding
# ---------------------------------------------------------------------------

def _square_operator(b: Braiding, space: str) -> LinOperator:
    if space == "V":
        return b.R
    if space == "V*":
        return dual_square_grid(b)
    raise UnsupportedConstruction(f"unknown space {space!r}")


def _image_vectors(op: LinOperator) -> list[Tensor]:
    ki = kernel_image([list(r) for r in op.entries])
    n = op.dim
    out = []
    for col in ki.image_basis:
        vec = {divmod(row, n): v for row, v in enumerate(col) if not v.is_zero()}
        out.append(vec)
    return out


def _kernel_vectors(op: LinOperator) -> list[Tensor]:
    ki = kernel_image([list(r) for r in op.entries])
    n = op.dim
    out = []
    for v in ki.kernel_basis:
        vec = {divmod(i, n): c for i, c in enumerate(v) if not c.is_zero()}
        out.append(vec)
    return out


def make_algebra(b: Braiding, kind: str, space: str) -> GradedQuotient:
    """The R-symmetric (sym) or R-skew-symmetric (lambda) algebra of V or V*.

    Hecke and involutive braidings use the eigenvalue ideals Im(q I - R)
    and Im(q^{-1} I + R) (with q = 1 in the involutive case).  BMW
    braidings use the middle idempotent: orthogonal series quotients by
    Im / Ker of P^{-1/q}, symplectic ones by Ker / Im of P^q.
    """
    if kind not in (SYM, LAMBDA):
        raise UnsupportedConstruction(f"unknown algebra kind {kind!r}")
    op = _square_operator(b, space)
    ident = LinOperator.identity(b.N, 2, op.labels)
    if b.kind in (HECKE, INVOLUTIVE):
        q = Q if b.kind == HECKE else ONE
        if kind == SYM:
            rel_op = ident.scale(q) - op
        else:
            rel_op = ident.scale(q.inverse()) + op
        relations = _image_vectors(rel_op)
    elif b.kind == BMW:
        q, mu = b.q, b.mu
        qi = q.inverse()
        if b.series == "orthogonal":
            middle = ((op - ident.scale(q)) @ (op - ident.scale(mu))).scale(
                ((q + qi) * (qi + mu)).inverse())
            relations = _image_vectors(middle) if kind == SYM else _kernel_vectors(middle)
        elif b.series == "symplectic":
            top = ((op + ident.scale(qi)) @ (op - ident.scale(mu))).scale(
                ((q + qi) * (q - mu)).inverse())
            relations = _kernel_vectors(top) if kind == SYM else _image_vectors(top)
        else:
            raise UnsupportedConstruction(f"BMW braiding lacks a series: {b.series!r}")
    else:
        raise UnsupportedConstruction(
            f"no {kind} construction for braiding kind {b.kind!r}")
    name = f"{kind}({space}) over {b.name or b.kind}"
    alg = GradedQuotient(b.N, space, kind, _canonical_relations(relations, b.N), name)
    return alg


def _canonical_relations(relations: list[Tensor], N: int) -> list[Tensor]:
    """Row-reduce the degree-2 relation span to a canonical basis."""
    ncols = N * N
    rows = []
    for rel in relations:
        row = [ZERO] * ncols
        for (i, j), c in rel.items():
            row[i * N + j] = c
        rows.append(row)
    red = row_reduce(rows, ncols, col_order=list(range(ncols - 1, -1, -1)))
    out = []
    for r in red.rows:
        vec = {divmod(col, N): v for col, v in enumerate(r) if not v.is_zero()}
        out.append(vec)
    return out


class FreeAlgebra(GradedQuotient):
    """The free tensor algebra, duck-typed as a quotient with no relations."""

    def __init__(self, N: int, space: str = "V"):
        super().__init__(N, space, "free", [], name="free tensor algebra")


# ---------------------------------------------------------------------------
# degree-2 placement of the BMW middle idempotent (report helper)
# ---------------------------------------------------------------------------

def mu_eigenspace_degree2_report(b: Braiding) -> dict:
    """Where the mu eigenspace of a BMW braiding lands in degree 2.

    Reports whether the rank-one invariant line survives in the symmetric
    quotient (orthogonal series) or the skew quotient (symplectic series),
    and dies in the complementary one.  Report-only; nothing beyond degree
    2 is claimed.
    """
    if b.kind != BMW:
        raise UnsupportedConstruction("mu eigenspace exists only for BMW braidings")
    from .braidings import projectors
    pmu = projectors(b)["mu"]
    mu_vectors = _image_vectors(pmu)
    surviving_kind = SYM if b.series == "orthogonal" else LAMBDA
    dying_kind = LAMBDA if b.series == "orthogonal" else SYM
    surv = make_algebra(b, surviving_kind, "V")
    die = make_algebra(b, dying_kind, "V")
    survives = all(surv.normal_form(vec) for vec in mu_vectors)
    dies = all(not die.normal_form(vec) for vec in mu_vectors)
    return {
        "series": b.series,
        "mu_rank": len(mu_vectors),
        "survives_in": surviving_kind if survives else None,
        "dies_in": dying_kind if dies else None,
        "passed": survives and dies,
    }


def classical_sym_dim(N: int, k: int) -> int:
    out = 1
    for t in range(k):
        out = out * (N + t) // (t + 1)
    return out


def classical_lambda_dim(N: int, k: int) -> int:
    if k > N:
        return 0
    out = 1
    for t in range(k):
        out = out * (N - t) // (t + 1)
    return out
