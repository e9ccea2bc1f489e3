import numpy as np
import pytest

from diraclab import (
    DomainError,
    Mode,
    ModeLattice,
    ZeroModePolicy,
    dirac_eigensection,
    enumerate_modes,
    generalized_sign,
    ker_dsigma_dimension,
)


def test_enumerate_half_integer_circle():
    lat = ModeLattice(dim_link=1, offset_t=0.5, cutoff=1)
    assert [m.l for m in enumerate_modes(lat)] == [-0.5, 0.5]


def test_enumerate_integer_circle_contains_zero():
    lat = ModeLattice(dim_link=1, offset_t=0.0, cutoff=1)
    assert [m.l for m in enumerate_modes(lat)] == [-1.0, 0.0, 1.0]


def test_enumerate_trivial_torus_grid():
    lat = ModeLattice(dim_link=2, offset_t=0.0, offset_s=0.0, cutoff=1)
    modes = enumerate_modes(lat)
    assert len(modes) == 9
    assert Mode(0.0, 0.0) in modes


def test_enumerate_half_offsets_exclude_zero():
    for off_t, off_s in ((0.5, 0.0), (0.0, 0.5), (0.5, 0.5)):
        lat = ModeLattice(dim_link=2, offset_t=off_t, offset_s=off_s, cutoff=2)
        assert all(not m.is_zero for m in enumerate_modes(lat))
        assert not lat.contains_zero_mode


def test_ordering_is_lexicographic_and_stable():
    lat = ModeLattice(dim_link=2, offset_t=0.5, offset_s=0.0, cutoff=1)
    modes = enumerate_modes(lat)
    assert modes == sorted(modes, key=Mode.sort_key)
    assert modes == enumerate_modes(lat)
    assert modes[0] == Mode(-0.5, -1.0)
    assert modes[-1] == Mode(0.5, 1.0)


def test_generalized_sign_explicit_values():
    assert generalized_sign(Mode(3.0, 4.0)) == (3 + 4j) / 5
    # sign(l, 0) degenerates to the ordinary sign, sign(0, m) to i sign(m)
    assert generalized_sign(Mode(2.0, 0.0)) == 1.0
    assert generalized_sign(Mode(-2.0, 0.0)) == -1.0
    assert generalized_sign(Mode(0.0, 3.0)) == 1j
    assert generalized_sign(Mode(0.0, -3.0)) == -1j
    assert generalized_sign(Mode(-1.5)) == -1.0


def test_generalized_sign_zero_mode_rejected():
    with pytest.raises(DomainError):
        generalized_sign(Mode(0.0, 0.0))
    with pytest.raises(DomainError):
        generalized_sign(Mode(0.0))


def test_sign_is_unimodular_and_odd():
    lat = ModeLattice(dim_link=2, offset_t=0.0, offset_s=0.0, cutoff=32)
    for mode in enumerate_modes(lat):
        if mode.is_zero:
            continue
        s = generalized_sign(mode)
        assert abs(abs(s) - 1.0) < 1e-15
        assert generalized_sign(Mode(-mode.l, -mode.m)) == -s


def test_eigensection_weight_values():
    assert dirac_eigensection(Mode(1.0, 0.0)) == (1.0, -1j)
    # oracle: second weight must equal (-i l + m) / sqrt(l^2 + m^2)
    for l, m in ((0.0, 1.0), (3.0, 4.0), (-2.0, 5.0)):
        a = np.hypot(l, m)
        expected = (-1j * l + m) / a
        got = dirac_eigensection(Mode(l, m))[1]
        assert abs(got - expected) < 1e-15
    assert dirac_eigensection(Mode(0.0, 1.0))[1] == pytest.approx(1.0)


def test_eigensection_weight_matches_sign_exactly():
    lat = ModeLattice(dim_link=2, offset_t=0.0, offset_s=0.0, cutoff=32)
    for mode in enumerate_modes(lat):
        if mode.is_zero:
            continue
        assert dirac_eigensection(mode)[1] == -1j * generalized_sign(mode)


def test_eigensection_zero_mode_rejected():
    with pytest.raises(DomainError):
        dirac_eigensection(Mode(0.0, 0.0))


def test_ker_dsigma_dimension():
    # oracle: two constant sections per surviving zero mode
    lat0 = ModeLattice(dim_link=2, offset_t=0.0, offset_s=0.0, cutoff=4)
    zero_count = sum(1 for m in enumerate_modes(lat0) if m.is_zero)
    assert ker_dsigma_dimension(lat0) == 2 * zero_count == 2
    for off in ((0.5, 0.0), (0.5, 0.5)):
        lat = ModeLattice(dim_link=2, offset_t=off[0], offset_s=off[1], cutoff=4)
        assert ker_dsigma_dimension(lat) == 0
    with pytest.raises(DomainError):
        ker_dsigma_dimension(ModeLattice(dim_link=1, offset_t=0.0, cutoff=4))


def test_lattice_validation():
    with pytest.raises(DomainError):
        ModeLattice(dim_link=3, offset_t=0.0, cutoff=4)
    with pytest.raises(DomainError):
        ModeLattice(dim_link=1, offset_t=0.25, cutoff=4)
    with pytest.raises(DomainError):
        ModeLattice(dim_link=1, offset_t=0.0, cutoff=0)
    with pytest.raises(DomainError):
        ModeLattice(
            dim_link=2, offset_t=0.0, offset_s=0.0, cutoff=4,
            zero_mode_policy=ZeroModePolicy.ASSIGN_PLUS,
        )


def test_axis_counts():
    lat = ModeLattice(dim_link=2, offset_t=0.5, offset_s=0.0, cutoff=3)
    assert lat.axis_count(0) == 6
    assert lat.axis_count(1) == 7
    assert len(enumerate_modes(lat)) == 42
