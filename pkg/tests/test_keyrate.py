import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from prcqkd.errors import NumericalDomainError, UnphysicalStateError
from prcqkd.keyrate import (
    CovarianceABC,
    check_physical,
    covariance,
    g_entropy,
    holevo_bound,
    mutual_information,
    plob_bound,
    secret_key_rate,
    symplectic_spectrum,
)
from prcqkd.params import ScenarioKind, SystemParams, build_scenario

from conftest import ref_values

OMEGA = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=float)


def params_for(inputs):
    return SystemParams(
        v_mod=float(inputs["v_mod"]),
        v_laser_override=float(inputs["v_laser"]),
        l_ac_km=float(inputs["l_ac"]),
        l_bc_km=float(inputs["l_bc"]),
        lo_ratio=float(inputs.get("lo_ratio", 1e8)),
        eps_prc_mode=inputs.get("mode", "approx"),
    )


def eig_spectrum(a, b, c):
    g = np.array([[a, 0, c, 0], [0, a, 0, -c], [c, 0, b, 0], [0, -c, 0, b]])
    mags = np.sort(np.abs(np.linalg.eigvals(1j * OMEGA @ g)))[::-1]
    return mags[0], mags[2]


# chi >= 1/eta - 1 keeps Bob's mode at or above vacuum, as in every pipeline point
physical_triples = st.builds(
    lambda v, eta, eps: (v, eta, 1 / eta - 1 + eps),
    st.floats(1.0, 60.0),
    st.floats(1e-4, 1.0),
    st.floats(0.0, 50.0),
)


def test_covariance_examples():
    cov = covariance(7, 0.75, 0.3673333533733333)
    assert cov.a == 7 and cov.c == 6.0
    assert cov.b == pytest.approx(5.5255, abs=1e-4)
    assert covariance(1, 1, 0) == CovarianceABC(1, 1, 0)
    cov = covariance(13, 12 / 14, 0.4346666867)
    assert (cov.a, cov.c) == (13, pytest.approx(12.0, rel=1e-15))
    assert cov.b == pytest.approx(11.5154, abs=1e-4)


@pytest.mark.parametrize("cov", [
    CovarianceABC(0.5, 1, 0),
    CovarianceABC(2, 2, 2),
    # ab - c^2 = 1 but a != b: passes the determinant test, fails the full one
    CovarianceABC(3, 1.5, math.sqrt(3.5)),
])
def test_unphysical_rejected(cov):
    with pytest.raises(UnphysicalStateError):
        check_physical(cov)


def test_mutual_information_examples(reference):
    assert mutual_information(CovarianceABC(7, 3, 0)) == 0
    ref = ref_values(reference, "asym_D0_vm6_vl0.005")
    cov = CovarianceABC(ref["a"], ref["b"], ref["c"])
    assert mutual_information(cov) == pytest.approx(ref["i_ab"], rel=1e-13)
    assert mutual_information(cov) == pytest.approx(1.6879, abs=1e-3)
    ref = ref_values(reference, "sym_D0_vm12_vl0.022")
    cov = CovarianceABC(ref["a"], ref["b"], ref["c"])
    assert mutual_information(cov) == pytest.approx(ref["i_ab"], rel=1e-13)
    assert mutual_information(cov) == pytest.approx(2.4890, abs=1e-3)


def test_g_entropy_examples(reference):
    assert g_entropy(0) == 0
    assert g_entropy(1) == 2
    want = float(reference["scalars"]["G(0.76615)"])
    assert g_entropy(0.76615) == pytest.approx(want, rel=1e-14)
    assert g_entropy(0.76615) == pytest.approx(1.74395, abs=1e-3)
    with pytest.raises(NumericalDomainError):
        g_entropy(-0.1)


@given(st.floats(0, 1e6), st.floats(1e-9, 1e3))
def test_g_entropy_increasing(x, dx):
    assert g_entropy(x + dx) >= g_entropy(x)


def test_g_entropy_continuous_at_zero():
    assert g_entropy(1e-300) < 1e-290


def test_spectrum_examples(reference):
    for v in (1.0, 2.0, 7.0, 41.0):
        l1, l2, l3 = symplectic_spectrum(CovarianceABC(v, v, math.sqrt(v * v - 1)))
        assert l1 == pytest.approx(1, abs=1e-9)
        assert l2 == pytest.approx(1, abs=1e-9)
        assert l3 == pytest.approx(1, abs=1e-9)
    ref = ref_values(reference, "asym_D0_vm6_vl0.005")
    l1, l2, l3 = symplectic_spectrum(CovarianceABC(ref["a"], ref["b"], ref["c"]))
    assert (l1, l2, l3) == pytest.approx((ref["lambda1"], ref["lambda2"], ref["lambda3"]), rel=1e-12)
    assert (l1, l2, l3) == pytest.approx((2.5323, 1.0576, 1.4832), abs=2e-4)


def test_holevo_examples(reference):
    assert holevo_bound(CovarianceABC(7, 7, math.sqrt(48))) == pytest.approx(0, abs=1e-9)
    for point, desk in (("asym_D0_vm6_vl0.005", 1.0506), ("sym_D0_vm12_vl0.022", 2.3900)):
        ref = ref_values(reference, point)
        chi = holevo_bound(CovarianceABC(ref["a"], ref["b"], ref["c"]))
        assert chi == pytest.approx(ref["chi_be"], rel=1e-12)
        assert chi == pytest.approx(desk, abs=1e-3)


def test_key_rate_regression_point(reference):
    ref = ref_values(reference, "asym_D0_vm6_vl0.005")
    r = secret_key_rate(SystemParams())
    assert r.key_rate == pytest.approx(ref["key_rate"], abs=1e-12)
    assert r.key_rate == pytest.approx(0.5698, abs=1e-3)
    assert r.feasible


@pytest.mark.parametrize("point", [
    "asym_D0_vm6_vl0.005",
    "asym_D0_vm6_vl0.005_exact",
    "sym_D0_vm12_vl0.022",
    "asym_D10_vm6_vl0.005",
    "asym_D20_vm6_vl0.005_lo1e4",
    "sym_D3_vm12_vl0.01",
])
def test_pipeline_matches_oracle(reference, point):
    entry = reference["points"][point]
    ref = {k: float(v) for k, v in entry["values"].items()}
    r = secret_key_rate(params_for(entry["inputs"]))
    got = {
        "eta": r.channel.eta, "eps_c": r.channel.eps_c, "eps_prc": r.noise.eps_prc,
        "chi_t": r.channel.chi_t, "a": r.cov.a, "b": r.cov.b, "c": r.cov.c,
        "i_ab": r.i_ab, "lambda1": r.lambda1, "lambda2": r.lambda2, "lambda3": r.lambda3,
        "chi_be": r.chi_be,
    }
    for k, v in got.items():
        assert v == pytest.approx(ref[k], rel=1e-11, abs=1e-13), k
    assert r.key_rate == pytest.approx(ref["key_rate"], abs=1e-11)


def test_near_threshold_points_have_tiny_rate():
    asym = secret_key_rate(SystemParams(v_laser_override=0.0366))
    assert abs(asym.key_rate) < 1e-3
    sym = secret_key_rate(SystemParams(v_mod=12, v_laser_override=0.0220))
    assert abs(sym.key_rate) < 2e-3


def test_plob_examples():
    assert plob_bound(0.5) == pytest.approx(1.0, rel=1e-15)
    assert plob_bound(0.9) == pytest.approx(math.log2(10), rel=1e-14)
    assert 0 < plob_bound(1e-12) < 1e-11
    for t in (0.0, 1.0, 1.2):
        with pytest.raises(NumericalDomainError):
            plob_bound(t)


def test_spectrum_matches_eigen_solver():
    rng = np.random.default_rng(7)
    for _ in range(300):
        v, eta = 1 + 40 * rng.random(), rng.uniform(1e-3, 1)
        cov = covariance(v, eta, 1 / eta - 1 + 5 * rng.random())
        l1, l2, _ = symplectic_spectrum(cov)
        e1, e2 = eig_spectrum(cov.a, cov.b, cov.c)
        assert l1 == pytest.approx(e1, abs=1e-9)
        assert l2 == pytest.approx(e2, abs=1e-9)


@given(physical_triples)
def test_physical_spectrum_bounds(t):
    cov = covariance(*t)
    l1, l2, l3 = symplectic_spectrum(cov)
    assert l1 >= l2 >= 1 - 1e-9
    assert l3 >= 1 - 1e-9
    assert holevo_bound(cov) >= -1e-9


@given(st.floats(1.0, 1e3))
def test_purity(v):
    cov = CovarianceABC(v, v, math.sqrt(v * v - 1))
    _, l2, _ = symplectic_spectrum(cov)
    assert l2 == pytest.approx(1, abs=1e-9)


GRID = [SystemParams(v_mod=vm, l_ac_km=d) for vm in (3.0, 6.0, 12.0) for d in (0.0, 5.0, 20.0)]


@pytest.mark.parametrize("field, values", [
    ("eps_a", (0.0, 0.002, 0.01, 0.03)),
    ("eps_b", (0.0, 0.002, 0.01, 0.03)),
    ("v_laser_override", (0.0, 0.005, 0.01, 0.03)),
    ("l_ac_km", (0.0, 5.0, 20.0, 40.0)),
])
def test_key_rate_non_increasing(field, values):
    for base in GRID:
        ks = [secret_key_rate(replace(base, **{field: x})).key_rate for x in values]
        assert all(x >= y for x, y in zip(ks, ks[1:])), (base, ks)


@given(
    v_mod=st.floats(0.5, 40),
    d=st.floats(0, 80),
    v_laser=st.floats(0, 0.05),
    kind=st.sampled_from(["extreme_asymmetric", "symmetric"]),
)
def test_ideal_calibration_dominates(v_mod, d, v_laser, kind):
    p = build_scenario(ScenarioKind(kind, d), SystemParams(v_mod=v_mod, v_laser_override=v_laser))
    assert secret_key_rate(p, True).key_rate >= secret_key_rate(p).key_rate


@given(d=st.floats(0.01, 150), v_mod=st.floats(0.5, 40), ideal=st.booleans())
def test_plob_dominates_relay_at_bob(d, v_mod, ideal):
    p = build_scenario(ScenarioKind("extreme_asymmetric", d), SystemParams(v_mod=v_mod))
    r = secret_key_rate(p, ideal)
    assert r.key_rate <= r.plob


def test_plob_infinite_without_loss():
    assert secret_key_rate(SystemParams()).plob == math.inf
