import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import HALF_CAR_KEYS, TABLE2, TABLE2_OMEGA, mna_solve, rel_err
from strategies import any_params, omegas, three_axle_params
from vehanalog.analogy import (
    GROUND,
    Branch,
    CoupledCapacitorPair,
    Netlist,
    analogue_system,
    assemble_admittance,
    coordinate_system,
    expand_couplings,
    norton_transform,
    pi_equivalent,
    to_norton,
    translate_force_current,
)
from vehanalog.errors import (
    AssemblyError,
    DegenerateSourceError,
    ParameterError,
    UnsupportedTopologyError,
)
from vehanalog.model import (
    HalfCarParams,
    HarmonicRoadExcitation,
    SecondOrderModel,
    TwoDofParams,
    build_half_car,
    build_model,
    build_two_dof,
    force_excitation,
)

SCALE = 1e5  # published admittances are displayed times 1e-5


def half_car_table2():
    return HalfCarParams(**{k: TABLE2[k] for k in HALF_CAR_KEYS})


def by_name(net):
    return {b.name: b for b in net.branches}


# translation

def test_half_car_coupled_pair_values(table2_road):
    net = translate_force_current(build_half_car(half_car_table2()), table2_road)
    (pair,) = net.couplings
    assert (pair.node_a, pair.node_b) == ("a", "b")
    assert pair.C_A == pytest.approx(2256.0698, abs=0.01)
    assert pair.C_B == pytest.approx(12021.9235, abs=0.01)
    # C_M = (I_G - l_d l_t m) / l^2 evaluated directly
    l = TABLE2["l_d"] + TABLE2["l_t"]
    direct = (TABLE2["I_G"] - TABLE2["l_d"] * TABLE2["l_t"] * TABLE2["m"]) / l**2
    assert pair.C_M == pytest.approx(direct, rel=1e-14)
    assert pair.C_M == pytest.approx(-3861.0034, abs=0.01)


def test_two_dof_netlist_topology():
    p = TwoDofParams(m1=2, m2=3, k1=5, k2=7, d1=11, d2=13)
    net = translate_force_current(build_two_dof(p))
    b = by_name(net)
    assert net.couplings == ()
    assert (b["C_1"].n_from, b["C_1"].n_to, b["C_1"].value) == ("1", GROUND, 2)
    assert (b["C_2"].n_from, b["C_2"].n_to, b["C_2"].value) == ("2", GROUND, 3)
    assert (b["L_1"].n_from, b["L_1"].n_to) == ("1", GROUND)
    assert b["L_1"].value == pytest.approx(1 / 5)
    assert (b["L_12"].n_from, b["L_12"].n_to) == ("1", "2")
    assert b["L_12"].value == pytest.approx(1 / 7)
    assert (b["G_1"].value, b["G_12"].value) == (11, 13)
    assert (b["G_1"].n_to, b["G_12"].n_to) == (GROUND, "2")
    assert [k for k in ("C", "L", "G", "I") for _ in range(net.count(k))] == list("CCLLGGI")
    src = b["I_2"]
    assert (src.n_from, src.n_to) == (GROUND, "2")
    assert src.value == pytest.approx(-1 / math.sqrt(2))


def test_no_coupling_when_inertia_decoupled(table2_road):
    p = half_car_table2()
    kw = {k: getattr(p, k) for k in HALF_CAR_KEYS}
    kw["I_G"] = kw["m"] * kw["l_d"] * kw["l_t"]
    net = translate_force_current(build_half_car(HalfCarParams(**kw)), table2_road)
    assert net.couplings == ()
    caps = [b for b in net.branches if b.kind == "C"]
    assert {b.n_from for b in caps} == {"a", "b", "d", "t"}
    assert all(b.n_to == GROUND for b in caps)


def test_unsupported_inertial_coupling():
    M = np.array([[3.0, 0.5, 0.2], [0.5, 3.0, 0.1], [0.2, 0.1, 3.0]])
    model = SecondOrderModel(M, np.eye(3), np.eye(3), ("x", "y", "z"), applied_force=[1, 0, 0])
    with pytest.raises(UnsupportedTopologyError):
        translate_force_current(model)


def test_road_translation_needs_axles():
    model = build_two_dof(TwoDofParams(m1=1, m2=1, k1=1, k2=1))
    with pytest.raises(ParameterError):
        translate_force_current(model, HarmonicRoadExcitation(0.01, 1, 1))


def test_three_axle_coupling_branches(table2_model, table2_road):
    net = translate_force_current(table2_model, table2_road)
    b = by_name(net)
    p = TABLE2
    l, la, lb = p["l_d"] + p["l_t"], p["l_a"], p["l_b"]
    assert b["L_ab"].value == pytest.approx(-(l**2) / (p["k_sm"] * la * lb))
    assert b["G_ab"].value == pytest.approx(-p["d_sm"] * la * lb / l**2)
    assert b["L_am"].value == pytest.approx(l / (p["k_sm"] * lb))
    assert b["L_bm"].value == pytest.approx(l / (p["k_sm"] * la))
    assert b["G_am"].value == pytest.approx(p["d_sm"] * lb / l)
    # frame nodes have no direct path to ground
    assert not any(x.n_to == GROUND and x.n_from in ("a", "b") and x.kind != "C" for x in net.branches)
    sys = analogue_system(table2_model, table2_road)
    w = sys.omega
    m12, d12, k12 = table2_model.M[0, 1], table2_model.D[0, 1], table2_model.K[0, 1]
    assert sys.Y[0, 1] - 1j * w * m12 - d12 == pytest.approx(k12 / (1j * w))
    assert k12 == pytest.approx(p["k_sm"] * la * lb / l**2)


# Pi network

def test_pi_equivalent_table2_values(table2_road):
    net = translate_force_current(build_half_car(half_car_table2()), table2_road)
    shunt_a, shunt_b, series = pi_equivalent(net.couplings[0])
    assert shunt_a.value == pytest.approx(6117.0732, abs=1e-3)
    assert shunt_b.value == pytest.approx(15882.9268, abs=1e-3)
    assert series.value == pytest.approx(net.couplings[0].C_M)
    assert (series.n_from, series.n_to) == ("a", "b")
    assert shunt_a.value + shunt_b.value + 2 * series.value == pytest.approx(
        net.couplings[0].C_A + net.couplings[0].C_B
    )


def test_pi_equivalent_zero_mutual():
    pair = CoupledCapacitorPair("K", "a", "b", 2.0, 3.0, 0.0)
    a, b, s = pi_equivalent(pair)
    assert (a.value, b.value, s.value) == (2.0, 3.0, 0.0)


def _stamp(branches, omega):
    net = Netlist(("0", "a", "b"), tuple(b for b in branches if b.value != 0))
    return assemble_admittance(net, omega).Y


@pytest.mark.parametrize("polarity", [1, -1])
def test_pi_stamp_matches_pair(table2_road, polarity):
    p = half_car_table2()
    net = translate_force_current(build_half_car(p), table2_road)
    c = net.couplings[0]
    pair = CoupledCapacitorPair("K", "a", "b", c.C_A, c.C_B, c.C_M, polarity)
    Ypair = pair.stamp(52.36)
    Ypi = _stamp(pi_equivalent(pair), 52.36)
    assert rel_err(Ypi, Ypair) <= 1e-12


def test_coupled_pair_invariants():
    with pytest.raises(ParameterError):
        CoupledCapacitorPair("K", "a", "b", 1.0, 1.0, 1.0)
    with pytest.raises(ParameterError):
        CoupledCapacitorPair("K", "a", "b", -1.0, 1.0, 0.0)
    with pytest.raises(ParameterError):
        CoupledCapacitorPair("K", "a", "0", 1.0, 1.0, 0.0)


# Norton

def test_norton_front_axle():
    w = TABLE2_OMEGA
    V = 0.05 * w / math.sqrt(2)
    I, Y = norton_transform(V, 150 + 1.36e6 / (1j * w))
    assert I == pytest.approx(277.68 - 48083.26j, abs=0.01)
    assert I / SCALE == pytest.approx(0.0028 - 0.4808j, abs=5e-5)
    assert Y == 150 + 1.36e6 / (1j * w)


def test_norton_rear_axle():
    w = TABLE2_OMEGA
    V = 0.05 * w / math.sqrt(2) * np.exp(-1j * math.radians(27))
    I, _ = norton_transform(V, 150 + 5.43e6 / (1j * w))
    assert I / SCALE == pytest.approx(-0.8691 - 1.7118j, abs=5e-5)


def test_norton_zero_source():
    assert norton_transform(0, 3 + 4j) == (0, 3 + 4j)


def test_norton_degenerate():
    with pytest.raises(DegenerateSourceError):
        norton_transform(1.0, 0)


def test_to_norton_removes_source_nodes(table2_model, table2_road):
    raw = translate_force_current(table2_model, table2_road)
    assert raw.nodes == ("0", "a", "b", "d", "t", "m", "rd", "rt", "rm")
    net = to_norton(raw, table2_road.omega)
    assert net.nodes == ("0", "a", "b", "d", "t", "m")
    assert net.count("V") == 0 and net.count("I") == 3
    tyres = [b for b in net.branches if b.name.startswith(("G_r", "L_r"))]
    assert all(b.n_to == GROUND for b in tyres)


def test_to_norton_rejects_floating_source():
    net = Netlist(("0", "x", "y"), (Branch("V", "V1", "x", "y", 1.0), Branch("G", "G1", "x", "0", 1.0)))
    with pytest.raises(AssemblyError):
        to_norton(net, 1.0)


# assembly

def test_assemble_single_conductance():
    net = Netlist(("0", "1"), (Branch("G", "G1", "1", "0", 2.5),))
    sys = assemble_admittance(net, 10.0)
    np.testing.assert_array_equal(sys.Y, [[2.5]])
    np.testing.assert_array_equal(sys.I, [0])


def test_assemble_rejects_voltage_source(table2_model, table2_road):
    with pytest.raises(AssemblyError):
        assemble_admittance(translate_force_current(table2_model, table2_road), 1.0)


def test_assemble_rejects_nonpositive_omega():
    with pytest.raises(AssemblyError):
        assemble_admittance(Netlist(("0", "1"), (Branch("G", "G1", "1", "0", 1.0),)), 0.0)


def test_assemble_flags_floating_node():
    net = Netlist(("0", "1", "2"), (Branch("G", "G1", "1", "0", 1.0),))
    sys = assemble_admittance(net, 1.0)
    assert sys.singular_warning and sys.floating_nodes == ("2",)


def test_two_dof_matches_nodal_pattern():
    p = TwoDofParams(m1=2, m2=3, k1=5, k2=7, d1=11, d2=13)
    w = 4.0
    sys = coordinate_system(translate_force_current(build_two_dof(p)), w)
    BL1, BL2 = 1 / ((1 / p.k1) * w * 1j), 1 / ((1 / p.k2) * w * 1j)
    BC1, BC2 = p.m1 * w * 1j, p.m2 * w * 1j
    G1, G2 = p.d1, p.d2
    expected = np.array([
        [G1 + BL1 + BC1 + G2 + BL2, -G2 - BL2],
        [-G2 - BL2, BC2 + G2 + BL2],
    ])
    assert rel_err(sys.Y, expected) <= 1e-12


def test_published_admittance_entries(table2_model, table2_road):
    Y = analogue_system(table2_model, table2_road).Y / SCALE
    assert Y[0, 0] == pytest.approx(0.1614 + 1.0408j, abs=1e-3)
    assert Y[0, 1] == pytest.approx(0.0264 + 1.9365j, abs=1e-3)
    assert Y[2, 2] == pytest.approx(0.1555 + 0.0950j, abs=1e-3)


def test_front_suspension_entry(table2_model, table2_road):
    # (1,3) equals (3,1) = -G_sd - 1/(L_sd j w)
    sys = analogue_system(table2_model, table2_road)
    w = sys.omega
    expected = -TABLE2["d_sd"] - TABLE2["k_sd"] / (1j * w)
    assert sys.Y[0, 2] == pytest.approx(expected)
    assert sys.Y[2, 0] == sys.Y[0, 2]


# properties

@settings(max_examples=80, deadline=None)
@given(any_params(), omegas)
def test_analogy_identity(p, w):
    model = build_model(p)
    exc = force_excitation(model, w) if isinstance(p, TwoDofParams) else HarmonicRoadExcitation(0.01, 2.0, 1.0).at_omega(w)
    sys = analogue_system(model, exc, w)
    expected = 1j * w * model.M + model.D + model.K / (1j * w)
    assert rel_err(sys.Y, expected) <= 1e-10
    assert np.abs(sys.Y - sys.Y.T).max() <= 1e-12 * np.abs(sys.Y).max()


@settings(max_examples=60, deadline=None)
@given(three_axle_params(), omegas)
def test_pi_expansion_preserves_admittance(p, w):
    model = build_model(p)
    exc = HarmonicRoadExcitation(0.02, 3.0, 1.0).at_omega(w)
    net = to_norton(translate_force_current(model, exc), w)
    Y1 = coordinate_system(net, w).Y
    Y2 = coordinate_system(expand_couplings(net), w).Y
    assert rel_err(Y2, Y1) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(three_axle_params(), omegas)
def test_norton_preserves_node_voltages(p, w):
    model = build_model(p)
    exc = HarmonicRoadExcitation(0.02, 3.0, 1.0).at_omega(w)
    raw = translate_force_current(model, exc)
    before = mna_solve(raw, w)
    sys = coordinate_system(to_norton(raw, w), w)
    after = np.linalg.solve(sys.Y, sys.I)
    ref = np.array([before[k] for k in sys.node_order])
    assert rel_err(after, ref) <= 1e-9
