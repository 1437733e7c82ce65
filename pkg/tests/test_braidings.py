import json
from fractions import Fraction

import pytest

from qfock.braidings import (
    BMW,
    Braiding,
    CurrentBraiding,
    baxterize,
    braiding_to_table,
    builtin_table_path,
    dual_pairings,
    dual_square_grid,
    expected_mu,
    extend_to_duals,
    load_braiding_table,
    load_builtin,
    make_flip,
    make_standard_hecke,
    make_superflip,
    projector_decomposition_ok,
    projectors,
    skew_inverse,
    spectral_braid_certificate,
    unitarity_certificate,
)
from qfock.errors import (
    InconsistentMu,
    InvalidTable,
    NotSkewInvertible,
    NotStrictlySkewInvertible,
    UnsupportedBase,
)
from qfock.scalars import ONE, Q, QINV, ZERO, Scalar
from qfock.tensorops import (
    LinOperator,
    enc_index,
    kernel_image,
    mat_identity,
    mat_mul,
    partial_trace,
    place,
)


def traced_flip(N):
    """What Tr_2 R_12 Psi_23 = P_13 looks like after the trace: the flip
    acting between the two surviving legs."""
    return LinOperator.flip(N)


class TestFlip:
    @pytest.mark.parametrize("N", [2, 3])
    def test_psi_is_flip_and_traces_trivial(self, N):
        b = make_flip(N)
        assert b.psi == b.R
        assert b.B == mat_identity(N)
        assert b.C == mat_identity(N)
        assert b.alpha == ONE

    def test_flip3_satisfies_unit_hecke_condition(self):
        # (P - I)(P + I) = 0, the q = 1 shadow of the Hecke condition
        b = make_flip(3)
        ident = LinOperator.identity(3, 2)
        assert ((b.R - ident) @ (b.R + ident)).is_zero()

    @pytest.mark.parametrize("N", [2, 3])
    def test_defining_trace_identity(self, N):
        # Tr_2 R_12 Psi_23 = P_13, checked through the tensorops route
        b = make_flip(N)
        prod = place(b.R, (1, 2), 3) @ place(b.psi, (2, 3), 3)
        assert partial_trace(prod, {2}) == traced_flip(N)


class TestSuperflip:
    def test_b_matrix_signs(self):
        b = make_superflip(1, 1)
        assert b.B == [[ONE, ZERO], [ZERO, Scalar.from_int(-1)]]
        assert b.C == b.B
        assert b.alpha == ONE

    def test_involutive(self):
        b = make_superflip(1, 2)
        assert not b.validate()
        assert b.skew.strict


class TestStandardHecke:
    def test_n2_hecke_condition_exact(self):
        b = make_standard_hecke(2)
        ident = LinOperator.identity(2, 2)
        lhs = (b.R - ident.scale(Q)) @ (b.R + ident.scale(QINV))
        assert lhs.is_zero()

    def test_n2_eigenspace_dimensions(self):
        b = make_standard_hecke(2)
        pr = projectors(b)
        assert kernel_image([list(r) for r in pr["q"].entries]).rank == 3
        assert kernel_image([list(r) for r in pr["-1/q"].entries]).rank == 1

    def test_n2_image_rank_of_hecke_relation_map(self):
        b = make_standard_hecke(2)
        ident = LinOperator.identity(2, 2)
        m = ident.scale(Q) - b.R
        assert kernel_image([list(r) for r in m.entries]).rank == 1

    @pytest.mark.parametrize("N", [2, 3])
    def test_skew_data(self, N):
        b = make_standard_hecke(N)
        sk = b.skew
        assert sk.strict
        for i in range(N):
            for j in range(N):
                if i != j:
                    assert sk.B[i][j].is_zero() and sk.C[i][j].is_zero()
        assert sk.alpha == Scalar.q_power(-2 * N)

    def test_n2_frozen_b_and_c(self):
        sk = make_standard_hecke(2).skew
        assert sk.B == [[Scalar.q_power(-3), ZERO], [ZERO, QINV]]
        assert sk.C == [[QINV, ZERO], [ZERO, Scalar.q_power(-3)]]

    def test_degenerates_to_flip_at_q_one(self):
        b = make_standard_hecke(2)
        f = make_flip(2)
        at1 = [[e.evaluate(1) for e in row] for row in b.R.entries]
        flip1 = [[e.evaluate(1) for e in row] for row in f.R.entries]
        assert at1 == flip1

    def test_partial_trace_route_matches_b(self):
        b = make_standard_hecke(2)
        traced = partial_trace(b.psi, {1})
        assert [[traced.entries[j][i] for j in range(2)] for i in range(2)] == b.B

    def test_defining_trace_identity(self):
        b = make_standard_hecke(2)
        prod = place(b.R, (1, 2), 3) @ place(b.psi, (2, 3), 3)
        assert partial_trace(prod, {2}) == traced_flip(2)


class TestSkewInverseErrors:
    def test_rank_deficient_operator_rejected(self):
        rows = [[ZERO] * 4 for _ in range(4)]
        rows[0][0] = ONE
        fake = Braiding(2, LinOperator.from_rows(rows, 2, 2), "involutive")
        with pytest.raises(NotSkewInvertible):
            skew_inverse(fake)

    def test_singular_operator_has_no_duals(self):
        from qfock.errors import NotInvertible
        p = LinOperator.flip(2)
        ident = LinOperator.identity(2, 2)
        half = Scalar.make({0: 1}, {0: 2})
        sym = (ident + p).scale(half)   # rank-3 idempotent, not invertible
        fake = Braiding(2, sym, "involutive")
        with pytest.raises(NotInvertible):
            extend_to_duals(fake)


class TestDuals:
    def test_flip_extensions_are_flips(self):
        b = make_flip(2)
        ext = extend_to_duals(b)
        flip_entries = b.R.entries
        assert ext.v_vstar.entries == flip_entries
        assert ext.vstar_v.entries == flip_entries
        assert ext.vstar_vstar.entries == flip_entries

    def test_vstar_v_reproduces_psi(self):
        b = make_standard_hecke(2)
        ext = extend_to_duals(b)
        N = 2
        for i in range(N):
            for j in range(N):
                for k in range(N):
                    for l in range(N):
                        assert ext.vstar_v.entries[enc_index((l, k), N)][enc_index((i, j), N)] == \
                            b.psi.entries[enc_index((l, i), N)][enc_index((k, j), N)]

    @pytest.mark.parametrize("maker", [make_flip, make_standard_hecke])
    def test_mixed_braid_relation_v_v_vstar(self, maker):
        b = maker(2)
        ext = extend_to_duals(b)
        lab0 = ("V", "V", "V*")
        # word R12 R23 R12 applied right to left
        a1 = place(b.R, (1, 2), 3, labels=lab0)
        a2 = place(ext.v_vstar, (2, 3), 3, labels=a1.labels_out)
        a3 = place(ext.v_vstar, (1, 2), 3, labels=a2.labels_out)
        lhs = a3 @ a2 @ a1
        b1 = place(ext.v_vstar, (2, 3), 3, labels=lab0)
        b2 = place(ext.v_vstar, (1, 2), 3, labels=b1.labels_out)
        b3 = place(b.R, (2, 3), 3, labels=b2.labels_out)
        rhs = b3 @ b2 @ b1
        assert lhs == rhs

    def test_dual_square_satisfies_same_minimal_polynomial(self):
        b = make_standard_hecke(3)
        rs = dual_square_grid(b)
        ident = LinOperator.identity(3, 2, ("V*", "V*"))
        assert ((rs - ident.scale(Q)) @ (rs + ident.scale(QINV))).is_zero()

    def test_pairings(self):
        b = make_standard_hecke(2)
        dp = dual_pairings(b)
        assert dp.right == mat_identity(2)
        assert dp.left == b.B                     # left pairing equals B
        binv = [[Scalar.q_power(3), ZERO], [ZERO, Q]]
        assert dp.tilde_matrix == binv
        assert dp.tilde_right == binv

    def test_flip_pairings_trivial(self):
        dp = dual_pairings(make_flip(3))
        assert dp.left == mat_identity(3)
        assert dp.right == mat_identity(3)


class TestProjectors:
    def test_flip_symmetrizer(self):
        b = make_flip(2)
        pr = projectors(b)
        ident = LinOperator.identity(2, 2)
        half = Scalar.make({0: 1}, {0: 2})
        assert pr["q"] == (ident + b.R).scale(half)
        assert pr["-1/q"] == (ident - b.R).scale(half)

    @pytest.mark.parametrize("maker", [make_flip, make_standard_hecke])
    def test_completeness(self, maker):
        assert projector_decomposition_ok(maker(2))

    def test_bmw_orthogonal_mu_rank_one(self):
        b = load_builtin("bmw-orth-3")
        pr = projectors(b)
        assert kernel_image([list(r) for r in pr["mu"].entries]).rank == 1

    def test_bmw_ranks(self):
        b = load_builtin("bmw-orth-3")
        pr = projectors(b)
        ranks = {k: kernel_image([list(r) for r in p.entries]).rank for k, p in pr.items()}
        assert ranks == {"q": 5, "-1/q": 3, "mu": 1}
        assert projector_decomposition_ok(b)
        s = load_builtin("bmw-sympl-2")
        prs = projectors(s)
        ranks = {k: kernel_image([list(r) for r in p.entries]).rank for k, p in prs.items()}
        assert ranks == {"q": 3, "-1/q": 0, "mu": 1}


class TestTables:
    def test_roundtrip(self):
        b = make_standard_hecke(2)
        doc = braiding_to_table(b)
        again = load_braiding_table(doc)
        assert again.R == b.R and again.kind == b.kind

    @pytest.mark.parametrize("name", ["std-hecke-2", "std-hecke-3", "bmw-orth-3", "bmw-sympl-2"])
    def test_builtin_tables_load(self, name):
        b = load_builtin(name)
        assert not b.validate()
        assert b.skew.strict
        assert b.alpha is not None

    def test_symplectic_mu_value(self):
        b = load_builtin("bmw-sympl-2")
        assert b.mu == expected_mu("symplectic", 2)
        assert b.mu == Scalar.q_power(-3, -1)

    def test_orthogonal_cubic_polynomial(self):
        b = load_builtin("bmw-orth-3")
        ident = LinOperator.identity(3, 2)
        prod = (b.R - ident.scale(Q)) @ (b.R + ident.scale(QINV)) @ \
            (b.R - ident.scale(Scalar.q_power(-2)))
        assert prod.is_zero()

    def test_corrupted_entry_rejected(self):
        with open(builtin_table_path("bmw-orth-3"), encoding="utf-8") as fh:
            doc = json.load(fh)
        doc["entries"][0]["value"] = (Q + ONE).to_pairs()
        with pytest.raises(InvalidTable):
            load_braiding_table(doc)

    def test_braid_violation_rejected(self):
        doc = braiding_to_table(make_standard_hecke(2))
        # swap one exchange entry so the braid relation must break
        for ent in doc["entries"]:
            if (ent["i"], ent["j"], ent["k"], ent["l"]) == (1, 2, 2, 1):
                ent["value"] = (Q + Q).to_pairs()
        with pytest.raises(InvalidTable):
            load_braiding_table(doc)

    def test_inconsistent_mu_rejected(self):
        with open(builtin_table_path("bmw-sympl-2"), encoding="utf-8") as fh:
            doc = json.load(fh)
        doc["mu"] = Scalar.q_power(-3).to_pairs()   # sign flipped
        with pytest.raises(InconsistentMu):
            load_braiding_table(doc)

    def test_malformed_documents_rejected(self):
        with pytest.raises(InvalidTable):
            load_braiding_table({"N": 2})
        doc = braiding_to_table(make_standard_hecke(2))
        doc["format_version"] = 99
        with pytest.raises(InvalidTable):
            load_braiding_table(doc)
        doc = braiding_to_table(make_standard_hecke(2))
        doc["entries"][0]["i"] = 7
        with pytest.raises(InvalidTable):
            load_braiding_table(doc)

    def test_skew_inverse_consistency_of_all_builtins(self):
        for name in ("std-hecke-2", "bmw-orth-3", "bmw-sympl-2"):
            b = load_builtin(name)
            prod = place(b.R, (1, 2), 3) @ place(b.psi, (2, 3), 3)
            assert partial_trace(prod, {2}) == traced_flip(b.N)


class TestBaxterize:
    def test_rational_flip_form(self):
        cb = baxterize(make_flip(2), "rational")
        u, v = Fraction(3), Fraction(1)
        got = cb.r_at(u, v)
        ident = LinOperator.identity(2, 2)
        assert got == cb.base.R - ident.scale(Scalar.from_fraction(Fraction(1, 2)))

    def test_trig_normalized_involutive_at_samples(self):
        cb = baxterize(make_standard_hecke(2), "trigonometric")
        ident = LinOperator.identity(2, 2)
        for u, v in ((2, 3), (5, 7), (3, 11)):
            u, v = Fraction(u), Fraction(v)
            assert cb.normalized_at(u, v) @ cb.normalized_at(v, u) == ident

    def test_unsupported_bases(self):
        with pytest.raises(UnsupportedBase):
            baxterize(load_builtin("bmw-orth-3"), "trigonometric")
        with pytest.raises(UnsupportedBase):
            baxterize(make_standard_hecke(2), "rational")
        with pytest.raises(UnsupportedBase):
            baxterize(make_flip(2), "trigonometric")

    @pytest.mark.parametrize("cb_maker", [
        lambda: baxterize(make_flip(2), "rational"),
        lambda: baxterize(make_standard_hecke(2), "trigonometric"),
    ])
    def test_grid_certificates(self, cb_maker):
        cb = cb_maker()
        assert unitarity_certificate(cb)["passed"]
        assert spectral_braid_certificate(cb)["passed"]


class TestStrictness:
    def test_dual_pairings_need_strictness(self):
        rows = [[ZERO] * 4 for _ in range(4)]
        # an involutive braiding whose B happens to be singular does not
        # exist at N=2 among our constructors, so simulate by zeroing B
        b = make_flip(2)
        data = b.skew
        data.B_inv = None
        with pytest.raises(NotStrictlySkewInvertible):
            dual_pairings(b)
