import math

import numpy as np
import pytest

from diraclab import (
    DomainError,
    LedgerInput,
    Mode,
    ModeLattice,
    NumericError,
    RealifiedOperator,
    SubspaceTag,
    SymbolData,
    apply_T,
    build_T,
    build_T_full,
    cokernel_correspondence,
    field,
    numerical_index,
    random_symbol,
    reconstruct_eta,
    stabilized_index,
    virtual_dimension_ledger,
    winding_number,
)
from diraclab.engine import codomain_window, poly_conj, poly_mul, realified_multiplication_by_i

HALF1 = ModeLattice(dim_link=1, offset_t=0.5, cutoff=8)
TRIV2 = ModeLattice(dim_link=2, offset_t=0.0, offset_s=0.0, cutoff=8)


def test_symbol_validation():
    with pytest.raises(DomainError):
        SymbolData(dim=1, d_plus={}, d_minus={})
    with pytest.raises(DomainError):
        SymbolData(dim=1, d_plus={(0.5,): 1.0}, d_minus={(0.0,): 1.0})
    with pytest.raises(DomainError):
        SymbolData(dim=1, d_plus={(0.25,): 1.0}, d_minus={})
    sym = SymbolData(dim=1, d_plus={(1.0,): 1.0}, d_minus={(0.0,): 1.0})
    assert sym.offsets == (0.0,)
    assert sym.bandwidth == 1.0


def test_nondegeneracy_check_reports_failing_point():
    # |e^{it} - 1| vanishes at t = 0, which the sample grid hits exactly
    sym = SymbolData(dim=1, d_plus={(1.0,): 1.0, (0.0,): -1.0}, d_minus={})
    with pytest.raises(DomainError) as err:
        sym.require_nondegenerate()
    assert "sample point" in str(err.value)
    with pytest.raises(DomainError):
        build_T(sym, ModeLattice(dim_link=1, offset_t=0.5, cutoff=4), 4, SubspaceTag.EXP_MINUS)


def pointwise_projection_oracle(symbol, fld, cod_modes, n=512):
    """Dense oracle: evaluate conj(d-)a - d+ conj(b) on a grid, project by sums."""
    xs = 4.0 * math.pi * np.arange(n) / n
    dim = symbol.dim

    def values(poly):
        if dim == 1:
            out = np.zeros(n, dtype=complex)
            for (l,), c in poly.items():
                out += c * np.exp(1j * l * xs)
            return out
        out = np.zeros((n, n), dtype=complex)
        for (l, m), c in poly.items():
            out += c * np.outer(np.exp(1j * l * xs), np.exp(1j * m * xs))
        return out

    a_poly, b_poly = {}, {}
    for mode, (x, y) in fld.coefficients.items():
        if x != 0:
            a_poly[mode.as_tuple()] = x
        if y != 0:
            b_poly[mode.as_tuple()] = y
    total = np.conj(values(symbol.d_minus)) * values(a_poly) - values(symbol.d_plus) * np.conj(values(b_poly))
    out = {}
    for key in cod_modes:
        if dim == 1:
            phase = np.exp(-1j * key[0] * xs)
        else:
            phase = np.outer(np.exp(-1j * key[0] * xs), np.exp(-1j * key[1] * xs))
        out[key] = complex(np.mean(total * phase))
    return out


def test_apply_T_matches_pointwise_oracle():
    rng = np.random.default_rng(2)
    sym = SymbolData(
        dim=1,
        d_plus={(1.0,): 0.3 - 0.4j, (0.0,): 0.8},
        d_minus={(-1.0,): 1.0 + 0.2j, (0.0,): -0.1j},
    )
    lat = ModeLattice(dim_link=1, offset_t=0.5, cutoff=3)
    coeffs = {}
    for l in (-1.5, 0.5, 2.5):
        coeffs[Mode(l)] = (complex(*rng.uniform(-1, 1, 2)), complex(*rng.uniform(-1, 1, 2)))
    fld = field(lat, coeffs)
    image = apply_T(sym, fld)
    oracle = pointwise_projection_oracle(sym, fld, sorted(image))
    for key in image:
        assert image[key] == pytest.approx(oracle[key], rel=1e-12, abs=1e-12)


def test_build_T_identity_case_is_a_signed_permutation():
    sym = SymbolData(dim=1, d_plus={}, d_minus={(0.0,): 1.0})
    op = build_T(sym, HALF1, 8, SubspaceTag.EXP_MINUS)
    assert op.matrix.shape == (32, 32)
    assert np.array_equal(op.matrix, np.eye(32))


def test_build_T_pure_conjugation_blocks_are_reflections():
    sym = SymbolData(dim=1, d_plus={(0.0,): 1.0}, d_minus={})
    op = build_T(sym, HALF1, 4, SubspaceTag.EXP_MINUS)
    M = op.matrix
    assert np.array_equal(np.abs(M) > 0.5, np.abs(M) > 0.0)  # all entries 0 or +-1
    col = {desc: i for i, desc in enumerate(op.col_basis)}
    row = {desc: i for i, desc in enumerate(op.row_basis)}
    # p at mode l maps to i sign(l) conj(p) at mode -l: the 2x2 Re/Im block
    # is the reflection [[0, s], [s, 0]] (determinant -1, conjugate-linear)
    for l in (-3.5, -0.5, 2.5):
        s = 1.0 if l > 0 else -1.0
        block = M[np.ix_(
            [row[((-l,), "re")], row[((-l,), "im")]],
            [col[((l,), "pattern", "re")], col[((l,), "pattern", "im")]],
        )]
        assert np.array_equal(block, np.array([[0.0, s], [s, 0.0]]))
        assert np.linalg.det(block) == -1.0
    # applying the map twice gives p -> sign(-l) sign(l) p = -p
    assert np.array_equal(M @ M, -np.eye(M.shape[0]))


def test_build_T_mixed_symbol_matches_oracle_entrywise():
    sym = SymbolData(dim=1, d_plus={(1.0,): 1.0}, d_minus={(0.0,): 1.0})
    lat = ModeLattice(dim_link=1, offset_t=0.5, cutoff=4)
    op = build_T(sym, lat, 4, SubspaceTag.EXP_MINUS)
    from diraclab import pattern_second_weight

    for ci, (key, kind, part) in enumerate(op.col_basis):
        mode = Mode(*key)
        unit = 1.0 if part == "re" else 1j
        w = pattern_second_weight(SubspaceTag.EXP_MINUS, mode)
        fld = field(lat, {mode: (unit, w * unit)})
        oracle = pointwise_projection_oracle(sym, fld, [k for k, _ in op.row_basis[::2]])
        for ri, (rkey, rpart) in enumerate(op.row_basis):
            want = oracle[rkey].real if rpart == "re" else oracle[rkey].imag
            assert op.matrix[ri, ci] == pytest.approx(want, abs=1e-12)


def test_conjugation_block_structure_under_multiplication_by_i():
    lat = HALF1
    n_dom = lat.axis_count(0, 4)
    sym_minus = SymbolData(dim=1, d_plus={}, d_minus={(0.5,): 0.7 + 0.1j, (-0.5,): 0.2})
    sym_plus = SymbolData(dim=1, d_plus={(0.5,): 0.7 + 0.1j, (-0.5,): 0.2}, d_minus={})
    op_minus = build_T(sym_minus, lat, 4, SubspaceTag.EXP_MINUS)
    op_plus = build_T(sym_plus, lat, 4, SubspaceTag.EXP_MINUS)
    J_dom = realified_multiplication_by_i(n_dom)
    J_cod_minus = realified_multiplication_by_i(op_minus.matrix.shape[0] // 2)
    J_cod_plus = realified_multiplication_by_i(op_plus.matrix.shape[0] // 2)
    # the conj(d-) part is complex-linear, the d+ part conjugate-linear
    assert np.allclose(op_minus.matrix @ J_dom, J_cod_minus @ op_minus.matrix, atol=1e-14)
    assert np.allclose(op_plus.matrix @ J_dom, -J_cod_plus @ op_plus.matrix, atol=1e-14)


def test_codomain_window_counts():
    sym = SymbolData(dim=1, d_plus={(1.0,): 1.0}, d_minus={(0.0,): 1.0})
    window = codomain_window(sym, HALF1, 8)
    assert len(window) == HALF1.axis_count(0, 8)
    assert window[0] == (-7.5,) and window[-1] == (7.5,)
    # a pure half-integer shift slides the window off center
    sym2 = SymbolData(dim=2, d_plus={}, d_minus={(0.5, 0.0): 1.0})
    lat2 = ModeLattice(dim_link=2, offset_t=0.5, offset_s=0.0, cutoff=4)
    window2 = codomain_window(sym2, lat2, 4)
    ts = sorted({k[0] for k in window2})
    assert ts == [float(t) for t in range(-4, 4)]


def test_numerical_index_trivial_cases():
    eye = np.eye(10)
    op = RealifiedOperator(
        matrix=eye,
        row_basis=[((float(i),), p) for i in range(5) for p in ("re", "im")],
        col_basis=[((float(i),), "pattern", p) for i in range(5) for p in ("re", "im")],
        domain_tag="ExpMinus",
    )
    rec = numerical_index(op, 1e-8)
    assert (rec.dim_ker, rec.dim_coker, rec.index_real) == (0, 0, 0)
    padded = np.vstack([eye, np.zeros((2, 10))])
    op2 = RealifiedOperator(
        matrix=padded,
        row_basis=[((float(i),), p) for i in range(6) for p in ("re", "im")],
        col_basis=op.col_basis,
        domain_tag="ExpMinus",
    )
    rec2 = numerical_index(op2, 1e-8)
    assert (rec2.dim_ker, rec2.dim_coker, rec2.index_real) == (0, 2, -2)
    with pytest.raises(DomainError):
        numerical_index(
            RealifiedOperator(
                matrix=np.zeros((2, 2)),
                row_basis=[((0.0,), "re"), ((0.0,), "im")],
                col_basis=[((0.0,), "pattern", "re"), ((0.0,), "pattern", "im")],
                domain_tag="ExpMinus",
            ),
            1e-8,
        )


def test_numerical_index_explicit_torus_case():
    sym = SymbolData(dim=2, d_plus={}, d_minus={(0.0, 0.0): 1.0})
    op = build_T(sym, TRIV2, 8, SubspaceTag.EXP_MINUS)
    rec = numerical_index(op, 1e-8)
    assert rec.dim_ker == 0
    assert rec.dim_coker == 2
    assert rec.index_real == -2


def test_stabilized_index_spec_cases():
    sym = SymbolData(dim=1, d_plus={}, d_minus={(0.0,): 1.0})
    lat = ModeLattice(dim_link=1, offset_t=0.5, cutoff=32)
    rep = stabilized_index(sym, lat, [8, 16, 32], SubspaceTag.EXP_MINUS)
    assert rep.stable and rep.index_real == 0
    assert rep.dim_ker == [0, 0, 0] and rep.dim_coker == [0, 0, 0]

    sym2 = SymbolData(dim=1, d_plus={(1.0,): 1.0}, d_minus={(0.0,): 1.0})
    rep2 = stabilized_index(sym2, lat, [8, 16, 32], SubspaceTag.EXP_MINUS)
    assert rep2.stable and rep2.index_real == 0 and rep2.index_complex == 0.0

    sym3 = SymbolData(dim=2, d_plus={}, d_minus={(0.0, 0.0): 1.0})
    lat3 = ModeLattice(dim_link=2, offset_t=0.0, offset_s=0.0, cutoff=12)
    rep3 = stabilized_index(sym3, lat3, [4, 8, 12], SubspaceTag.EXP_MINUS)
    assert rep3.stable and rep3.index_complex == -1.0
    assert rep3.dim_ker == [0, 0, 0]


def test_stabilized_index_flags_instability_on_near_kernel_symbol():
    # perturbing the shift symbol moves its exact one-dimensional kernel to a
    # singular value ~ delta^2/2, parked just above the rank threshold: the
    # spectral gap collapses and no index may be claimed
    sym = SymbolData(dim=1, d_plus={(1.0,): 1.0, (0.0,): 3e-4}, d_minus={(0.0,): 1.0})
    lat = ModeLattice(dim_link=1, offset_t=0.5, cutoff=16)
    rep = stabilized_index(sym, lat, [4, 8, 16], SubspaceTag.EXP_MINUS)
    assert not rep.stable
    assert rep.index_real is None
    assert any(g < 1e3 for g in rep.spectral_gap)


def test_stabilized_index_validates_cutoffs():
    sym = SymbolData(dim=1, d_plus={}, d_minus={(0.0,): 1.0})
    with pytest.raises(DomainError):
        stabilized_index(sym, HALF1, [8, 16], SubspaceTag.EXP_MINUS)
    with pytest.raises(DomainError):
        stabilized_index(sym, HALF1, [8, 8, 16], SubspaceTag.EXP_MINUS)


def test_tolerance_robustness_of_verdicts():
    cases = [
        (SymbolData(dim=1, d_plus={}, d_minus={(0.0,): 1.0}),
         ModeLattice(dim_link=1, offset_t=0.5, cutoff=16), [4, 8, 16]),
        (SymbolData(dim=1, d_plus={(1.0,): 1.0}, d_minus={(0.0,): 1.0}),
         ModeLattice(dim_link=1, offset_t=0.5, cutoff=16), [4, 8, 16]),
        (SymbolData(dim=2, d_plus={}, d_minus={(0.0, 0.0): 1.0}),
         ModeLattice(dim_link=2, offset_t=0.0, offset_s=0.0, cutoff=6), [2, 4, 6]),
    ]
    rng = np.random.default_rng(12)
    lat = ModeLattice(dim_link=1, offset_t=0.5, cutoff=16)
    cases.append((random_symbol(lat, rng, 1.5), lat, [4, 8, 16]))
    for sym, lat_, cuts in cases:
        verdicts = {
            tol: stabilized_index(sym, lat_, cuts, SubspaceTag.EXP_MINUS, tol_rel=tol)
            for tol in (1e-10, 1e-8, 1e-6)
        }
        stables = {v.stable for v in verdicts.values()}
        indices = {v.index_real for v in verdicts.values()}
        assert len(stables) == 1 and len(indices) == 1


def test_kernel_identity_exact_through_the_matrix():
    rng = np.random.default_rng(4)
    lat = ModeLattice(dim_link=1, offset_t=0.5, cutoff=6)
    sym = random_symbol(lat, rng, 1.5)
    eta = {(float(j),): complex(*rng.uniform(-1, 1, 2)) for j in range(-4, 5)}
    u_plus = poly_mul(sym.d_plus, eta)
    u_minus = poly_mul(sym.d_minus, poly_conj(eta))
    coeffs = {}
    for key, val in u_plus.items():
        x, y = coeffs.get(Mode(*key), (0j, 0j))
        coeffs[Mode(*key)] = (x + val, y)
    for key, val in u_minus.items():
        x, y = coeffs.get(Mode(*key), (0j, 0j))
        coeffs[Mode(*key)] = (x, y + val)
    fld = field(lat, coeffs)
    image = apply_T(sym, fld)
    assert max((abs(v) for v in image.values()), default=0.0) < 1e-13
    op = build_T_full(sym, lat, 6)
    vec = np.zeros(len(op.col_basis))
    idx = {desc: i for i, desc in enumerate(op.col_basis)}
    for mode, (x, y) in fld.coefficients.items():
        key = mode.as_tuple()
        vec[idx[(key, "comp1", "re")]] = x.real
        vec[idx[(key, "comp1", "im")]] = x.imag
        vec[idx[(key, "comp2", "re")]] = y.real
        vec[idx[(key, "comp2", "im")]] = y.imag
    assert np.max(np.abs(op.matrix @ vec)) < 1e-13


def test_reconstruct_eta_explicit_cases():
    lat = ModeLattice(dim_link=1, offset_t=0.5, cutoff=6)
    sym = SymbolData(dim=1, d_plus={(0.5,): 1.0}, d_minus={(-0.5,): 1.0, (0.5,): 0.3})
    eta0 = {(1.0,): 1.0 + 0.0j}
    u = _kernel_field(lat, sym, eta0)
    got = reconstruct_eta(u, sym)
    assert abs(got[(1.0,)] - 1.0) < 1e-10
    assert all(abs(v) < 1e-10 for k, v in got.items() if k != (1.0,))
    # constant reparametrization
    u2 = _kernel_field(lat, sym, {(0.0,): 1.0 + 0.0j})
    got2 = reconstruct_eta(u2, sym)
    assert abs(got2[(0.0,)] - 1.0) < 1e-10


def _kernel_field(lat, sym, eta):
    u_plus = poly_mul(sym.d_plus, eta)
    u_minus = poly_mul(sym.d_minus, poly_conj(eta))
    coeffs = {}
    for key, val in u_plus.items():
        x, y = coeffs.get(Mode(*key), (0j, 0j))
        coeffs[Mode(*key)] = (x + val, y)
    for key, val in u_minus.items():
        x, y = coeffs.get(Mode(*key), (0j, 0j))
        coeffs[Mode(*key)] = (x, y + val)
    return field(lat, coeffs)


def test_reconstruct_eta_rejects_non_kernel_data():
    lat = ModeLattice(dim_link=1, offset_t=0.5, cutoff=6)
    sym = SymbolData(dim=1, d_plus={(0.5,): 1.0}, d_minus={(-0.5,): 1.0})
    bad = field(lat, {Mode(0.5): (1.0, 0.0)})
    with pytest.raises(DomainError):
        reconstruct_eta(bad, sym)


def test_reconstruct_eta_branch_consistency_guard():
    lat = ModeLattice(dim_link=1, offset_t=0.5, cutoff=6)
    sym = SymbolData(dim=1, d_plus={(0.5,): 1.0}, d_minus={(-0.5,): 1.0})
    # mismatched reparametrizations on the two components
    u_plus = poly_mul(sym.d_plus, {(1.0,): 1.0 + 0j})
    u_minus = poly_mul(sym.d_minus, poly_conj({(2.0,): 1.0 + 0j}))
    coeffs = {}
    for key, val in u_plus.items():
        coeffs[Mode(*key)] = (val, 0j)
    for key, val in u_minus.items():
        x, y = coeffs.get(Mode(*key), (0j, 0j))
        coeffs[Mode(*key)] = (x, y + val)
    bad = field(lat, coeffs)
    with pytest.raises(NumericError):
        reconstruct_eta(bad, sym, kernel_residual_tol=math.inf)


def test_cokernel_correspondence_explicit_cases():
    lat = ModeLattice(dim_link=1, offset_t=0.5, cutoff=6)
    sym = SymbolData(dim=1, d_plus={(0.5,): 0.6}, d_minus={(-0.5,): 1.0})
    u = field(lat, {Mode(0.5): (0.6, 0.0), Mode(-0.5): (0.0, 1.0)})  # c0 = 1
    got = cokernel_correspondence(u, sym)
    assert abs(got[(0.0,)] - 1.0) < 1e-10

    lat2 = ModeLattice(dim_link=2, offset_t=0.0, offset_s=0.0, cutoff=4)
    sym2 = SymbolData(dim=2, d_plus={}, d_minus={(0.0, 0.0): 1.0})
    u2 = field(lat2, {Mode(0.0, 1.0): (0.0, 1.0)})  # u = (0, e^{is})
    got2 = cokernel_correspondence(u2, sym2)
    assert abs(got2[(0.0, 1.0)] - 1.0) < 1e-12


def test_cokernel_correspondence_rejects_inconsistent_data():
    lat = ModeLattice(dim_link=1, offset_t=0.5, cutoff=6)
    sym = SymbolData(dim=1, d_plus={(0.5,): 1.0}, d_minus={(-0.5,): 1.0})
    bad = field(lat, {Mode(0.5): (1.0, 0.0), Mode(-0.5): (0.0, 2.0)})
    with pytest.raises(DomainError):
        cokernel_correspondence(bad, sym)


def test_ledger_threedim_always_cancels():
    for k in range(0, 101):
        out = virtual_dimension_ledger(LedgerInput(dim_ker_dminus_l21=k), "3D")
        assert out["index_T_circ_B"] == -k
        assert out["virtual_dim"] == 0


def test_ledger_fourdim_chain():
    out = virtual_dimension_ledger(
        LedgerInput(ahat_integral=0, dim_ker_dsigma=2, dim_ker_dminus_l21=0, index_t_exp_minus=-1),
        "4D",
    )
    assert out["index_T_circ_B"] == 0 and out["virtual_dim"] == 0
    out2 = virtual_dimension_ledger(
        LedgerInput(ahat_integral=-2, dim_ker_dsigma=0, dim_ker_dminus_l21=1, index_t_exp_minus=0),
        "4D",
    )
    assert out2["index_T_circ_B"] == -1 and out2["virtual_dim"] == -2
    assert len(out2["chain"]) == 4
    with pytest.raises(DomainError):
        virtual_dimension_ledger(LedgerInput(dim_ker_dsigma=3), "4D")
    with pytest.raises(DomainError):
        virtual_dimension_ledger(LedgerInput(dim_ker_dminus_l21=-1), "3D")
    with pytest.raises(DomainError):
        virtual_dimension_ledger(LedgerInput(), "5D")


def test_random_symbol_is_seeded_and_nondegenerate():
    lat = ModeLattice(dim_link=1, offset_t=0.5, cutoff=8)
    a = random_symbol(lat, np.random.default_rng(9), 2.5)
    b = random_symbol(lat, np.random.default_rng(9), 2.5)
    assert a == b
    assert a.bandwidth <= 2.5
    lo, _ = a.nondegeneracy_minimum(256)
    assert lo > 0


def test_winding_diagnostic():
    assert winding_number({(1.0,): 1.0}) == 1.0
    assert winding_number({(-2.0,): 0.5j}) == -2.0
    assert winding_number({(0.5,): 1.0}) == 0.5
    assert winding_number({(0.0,): 2.0}) == 0.0
    assert winding_number({(1.0,): 1.0, (0.0,): -1.0}) is None
    with pytest.raises(DomainError):
        winding_number({(1.0, 0.0): 1.0})


def test_zero_bearing_domain_tags():
    # the plus-with-kernel domain gains the two zero-mode components: with
    # the constant symbol one of them spans a genuine kernel direction
    from diraclab import ker_dsigma_dimension

    sym = SymbolData(dim=2, d_plus={}, d_minus={(0.0, 0.0): 1.0})
    lat = ModeLattice(dim_link=2, offset_t=0.0, offset_s=0.0, cutoff=4)
    op = build_T(sym, lat, 4, SubspaceTag.EXP_PLUS_ZERO)
    rec = numerical_index(op, 1e-8)
    assert (rec.dim_ker, rec.dim_coker, rec.index_real) == (2, 0, 2)
    op_k = build_T(sym, lat, 4, SubspaceTag.KER_DSIGMA)
    assert op_k.matrix.shape[1] == ker_dsigma_dimension(lat)* 2


def test_dichotomy_ties_index_to_link_kernel_dimension():
    from diraclab import ker_dsigma_dimension

    lat = ModeLattice(dim_link=2, offset_t=0.0, offset_s=0.0, cutoff=8)
    sym = SymbolData(dim=2, d_plus={}, d_minus={(0.0, 0.0): 1.0})
    rep = stabilized_index(sym, lat, [2, 4, 8], SubspaceTag.EXP_MINUS)
    assert rep.index_complex == -ker_dsigma_dimension(lat) / 2


def test_mirrored_family_domain_tags():
    # on a circle link the mirrored patterns coincide with the plain ones
    # (real signs), so the constant symbol is again a bijection
    sym = SymbolData(dim=1, d_plus={}, d_minus={(0.0,): 1.0})
    rep = stabilized_index(sym, HALF1, [2, 4, 8], SubspaceTag.EEXP_MINUS)
    assert rep.stable and rep.index_real == 0
    # on the torus the conjugated sign changes the pattern but not the count
    sym2 = SymbolData(dim=2, d_plus={}, d_minus={(0.0, 0.0): 1.0})
    lat2 = ModeLattice(dim_link=2, offset_t=0.0, offset_s=0.0, cutoff=6)
    rep2 = stabilized_index(sym2, lat2, [2, 4, 6], SubspaceTag.EEXP_MINUS)
    assert rep2.stable and rep2.index_complex == -1.0


def test_spin_structure_dichotomy_for_random_symbols():
    # the stabilized index depends only on the offsets, not the symbol:
    # -(1/2) link-kernel dimension on the trivial lattice, zero otherwise
    from diraclab import ker_dsigma_dimension

    for offs in ((0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)):
        lat = ModeLattice(dim_link=2, offset_t=offs[0], offset_s=offs[1], cutoff=8)
        rng = np.random.default_rng(7)
        sym = random_symbol(lat, rng, 1.0)
        rep = stabilized_index(sym, lat, [4, 6, 8], SubspaceTag.EXP_MINUS)
        assert rep.stable
        assert rep.index_complex == -ker_dsigma_dimension(lat) / 2
