import math

import numpy as np
import pytest

from fockmetric import gaussian_ref as G
from fockmetric import metrology as M
from fockmetric.errors import DomainError, OutOfRangeError, UnboundedVarianceError

import oracles

OMEGAS = (0.05, 0.1, 0.5, 1.0)


@pytest.mark.parametrize("n,omega,expected", [(0, 1.0, 0.5), (3, 0.1, 650.0), (10, 1.0, 55.5)])
def test_qfi_fock_closed_examples(n, omega, expected):
    rep = M.qfi_fock_closed(n, omega)
    assert rep.qfi == pytest.approx(expected, rel=1e-14)
    assert rep.method == "closed-form"


def test_qfi_fock_closed_domain():
    with pytest.raises(DomainError):
        M.qfi_fock_closed(1, 0.0)


def test_qfi_pure_numeric_examples():
    assert M.qfi_pure_numeric(0, 1.0).qfi == pytest.approx(0.5, abs=1e-6)
    assert M.qfi_pure_numeric(5, 0.5).qfi == pytest.approx(62.0, abs=1e-4)
    assert M.qfi_pure_numeric(0, 1.0, "finite-difference").qfi == pytest.approx(0.5, abs=1e-6)
    for n in range(11):
        assert M.qfi_pure_numeric(n, 0.3).details["berry_term"] < 1e-12


@pytest.mark.parametrize("omega", OMEGAS)
@pytest.mark.parametrize("n", range(11))
def test_qfi_pure_numeric_matches_closed_form(n, omega):
    closed = M.qfi_fock_closed(n, omega).qfi
    assert M.qfi_pure_numeric(n, omega).qfi == pytest.approx(closed, rel=1e-6)
    assert M.qfi_pure_numeric(n, omega, "finite-difference").qfi == pytest.approx(closed, rel=1e-4)


@pytest.mark.parametrize("n", [0, 2, 6])
def test_qfi_pure_numeric_adaptive_quadrature_oracle(n):
    # fully independent: scipy wavefunction, finite-difference derivative, adaptive quad
    w = 0.5
    dd = oracles.quad_line(lambda x: oracles.dpsi_fd(n, w, x) ** 2, w)
    pd = oracles.quad_line(lambda x: oracles.psi_ref(n, w, x) * oracles.dpsi_fd(n, w, x), w)
    assert 4 * (dd - pd**2) == pytest.approx(M.qfi_pure_numeric(n, w).qfi, rel=1e-7)


def test_qfi_pure_numeric_unknown_route():
    with pytest.raises(ValueError):
        M.qfi_pure_numeric(1, 1.0, "spline")


@pytest.mark.parametrize("n", range(11))
def test_gaussian_formula_on_fock_moments(n):
    expected = (2 * n + 1) ** 2 / ((2 * n + 1) ** 2 + 1)
    rep = M.qfi_gaussian_formula(lambda w: G.moments_of_fock(n, w).sigma, lambda w: np.zeros(2), 1.0)
    assert rep.qfi == pytest.approx(expected, rel=1e-8)
    assert M.qfi_gaussian_fock(n, 1.0).qfi == pytest.approx(expected, rel=1e-15)


def test_gaussian_formula_vacuum_and_constant():
    vac = M.qfi_gaussian_formula(lambda w: np.diag([1 / w, w]), lambda w: np.zeros(2), 1.0)
    assert vac.qfi == pytest.approx(0.5, rel=1e-10)
    assert vac.details["purity_term"] == 0.0
    const = M.qfi_gaussian_formula(lambda w: np.diag([3.0, 2.0]), lambda w: np.array([0.1, 0.2]), 0.7)
    assert const.qfi == pytest.approx(0.0, abs=1e-12)


def test_gaussian_formula_displacement_and_purity_terms():
    # thermal family sigma = k(w) I with k = 1 + 2 w^2, displaced by d = (w, 0)
    k = lambda w: 1 + 2 * w * w
    w0 = 0.8
    rep = M.qfi_gaussian_formula(lambda w: k(w) * np.eye(2), lambda w: np.array([w, 0.0]), w0)
    kp = 4 * w0
    P, Pp = 1 / k(w0), -kp / k(w0) ** 2
    expected = 0.5 * 2 * (kp / k(w0)) ** 2 / (1 + P**2) + 2 * Pp**2 / (1 - P**4) + 1 / k(w0)
    assert rep.qfi == pytest.approx(expected, rel=1e-9)


def test_gaussian_formula_singular():
    from fockmetric.errors import NumericalError

    with pytest.raises(NumericalError):
        M.qfi_gaussian_formula(lambda w: np.zeros((2, 2)), lambda w: np.zeros(2), 1.0)


@pytest.mark.parametrize("n,omega,expected", [(0, 1.0, 0.5), (1, 1.0, 0.9), (10, 0.1, 441 / 442 / 0.01)])
def test_qfi_gaussian_fock_examples(n, omega, expected):
    assert M.qfi_gaussian_fock(n, omega).qfi == pytest.approx(expected, rel=1e-14)
    assert M.qfi_gaussian_fock(10, 0.1).qfi == pytest.approx(99.7738, abs=1e-4)


def test_cramer_rao():
    assert M.cramer_rao(0.5, 1) == 2.0
    assert M.cramer_rao(650, 100) == pytest.approx(1.5385e-5, rel=1e-4)
    assert M.cramer_rao(3.7) == pytest.approx(1 / 3.7)
    with pytest.raises(UnboundedVarianceError):
        M.cramer_rao(0.0, 5)
    rep = M.qfi_fock_closed(3, 0.1).with_crb(100)
    assert rep.crb == (100, pytest.approx(1 / 65000))


def test_relative_advantage():
    assert M.relative_advantage(0) == (1.0, 0.0)
    ratio, scaled = M.relative_advantage(3)
    assert ratio == 13
    assert scaled == pytest.approx(25.6495, abs=1e-4)
    for n in range(6):
        for w in OMEGAS:
            assert M.qfi_fock_closed(n, w).qfi / M.qfi_fock_closed(0, w).qfi == pytest.approx(M.relative_advantage(n)[0], rel=1e-14)


def test_qfi_per_energy():
    assert M.qfi_per_energy(3, 1.0) == pytest.approx(13 / 6, rel=1e-15)
    assert M.qfi_per_energy(10, 1.0) == pytest.approx(5.55, rel=1e-15)
    assert M.qfi_per_energy(5, 0.3) > M.qfi_per_energy(3, 0.3)
    with pytest.raises(UnboundedVarianceError):
        M.qfi_per_energy(0, 1.0)
    # equals QFI over the energy gap omega * n
    assert M.qfi_per_energy(7, 0.4) == pytest.approx(M.qfi_fock_closed(7, 0.4).qfi / (0.4 * 7), rel=1e-14)


@pytest.mark.parametrize("levels,expected", [([0], 0.5), ([0, 1], 1.0), ([0, 1, 2, 3, 4], 4.5)])
def test_superposition_formula(levels, expected):
    assert M.qfi_superposition_paper(levels, 1.0).qfi == pytest.approx(expected, rel=1e-15)


def test_superposition_empty():
    with pytest.raises(OutOfRangeError):
        M.qfi_superposition_paper([], 1.0)
    with pytest.raises(OutOfRangeError):
        M.qfi_superposition_exact([], 1.0)


@pytest.mark.parametrize(
    "levels,expected",
    [([0, 1], 1.0), ([0, 1, 2], 11 / 6), ([0, 1, 2, 3, 4], 4 * (45 / 8 - 2 * math.sqrt(24) / 16) / 5)],
)
def test_superposition_exact_examples(levels, expected):
    ladder = M.qfi_superposition_exact(levels, 1.0)
    quad = M.qfi_superposition_exact(levels, 1.0, route="quadrature")
    assert ladder.qfi == pytest.approx(expected, rel=1e-12)
    assert quad.qfi == pytest.approx(expected, rel=1e-10)
    assert oracles.superposition_qfi_fd(levels, 1.0) == pytest.approx(expected, rel=1e-6)


def test_superposition_exact_value_and_flag():
    rep = M.qfi_superposition_exact(range(5), 1.0)
    assert rep.qfi == pytest.approx(4.01010, abs=1e-5)
    assert rep.details["quartic_pairs"] == 1
    assert rep.details["cross_term_free"] == 4.5
    assert rep.details["relative_gap"] == pytest.approx(0.109, abs=1e-3)


@pytest.mark.parametrize(
    "levels",
    [[0], [0, 1, 2, 3], [2, 3, 5], [1, 2, 3], [0, 2, 3, 7], [5, 10, 11, 12], [0, 3, 10], [0, 4], [1, 5, 9], [0, 1, 2, 3, 4, 5, 6], [6, 10]],
)
@pytest.mark.parametrize("omega", [0.2, 1.0])
def test_superposition_exact_vs_formula(levels, omega):
    exact = M.qfi_superposition_exact(levels, omega)
    formula = M.qfi_superposition_paper(levels, omega)
    s = set(levels)
    if any(k + 4 in s for k in levels):
        assert exact.qfi < formula.qfi
    else:
        assert exact.qfi == pytest.approx(formula.qfi, abs=1e-9)


def test_superposition_level_limit():
    M.qfi_superposition_exact([38], 1.0)
    with pytest.raises(OutOfRangeError):
        M.qfi_superposition_exact([39], 1.0)


def test_fock_beats_gaussian_reference():
    for w in OMEGAS:
        assert M.qfi_fock_closed(0, w).qfi == pytest.approx(M.qfi_gaussian_fock(0, w).qfi, rel=1e-15)
        for n in range(1, 11):
            assert M.qfi_fock_closed(n, w).qfi > M.qfi_gaussian_fock(n, w).qfi


def test_qfi_increasing_in_ng_degree():
    for w in (0.05, 0.1, 0.5):
        pairs = sorted((G.ng_degree_fock(n), M.qfi_fock_closed(n, w).qfi) for n in range(41))
        assert all(b[1] > a[1] for a, b in zip(pairs, pairs[1:]))


QFI_OPS = {
    "fock_closed": lambda w: M.qfi_fock_closed(4, w).qfi,
    "pure_numeric": lambda w: M.qfi_pure_numeric(4, w).qfi,
    "pure_numeric_fd": lambda w: M.qfi_pure_numeric(4, w, "finite-difference").qfi,
    "gaussian_formula": lambda w: M.qfi_gaussian_fock_numeric(4, w).qfi,
    "gaussian_fock": lambda w: M.qfi_gaussian_fock(4, w).qfi,
    "superposition_formula": lambda w: M.qfi_superposition_paper(range(5), w).qfi,
    "superposition_exact": lambda w: M.qfi_superposition_exact(range(5), w).qfi,
    "superposition_exact_quad": lambda w: M.qfi_superposition_exact(range(5), w, route="quadrature").qfi,
}


@pytest.mark.parametrize("name", list(QFI_OPS))
@pytest.mark.parametrize("c", [2, 10])
def test_inverse_square_scaling(name, c):
    fn = QFI_OPS[name]
    for w in (0.05, 0.3, 1.0):
        assert fn(c * w) * c * c == pytest.approx(fn(w), rel=1e-12)


def test_report_rejects_unknown_method():
    with pytest.raises(ValueError):
        M.QfiReport(1.0, "x", 1.0, "bogus")
