import math

import numpy as np
import pytest

from peristalsim.actuator import ActuatorSpec
from peristalsim.drivetrain import CrankSpec, Manifold
from peristalsim.errors import DomainError
from peristalsim.transport import (FluidSpec, LimbModel, cheng_viscosity,
                                   flow_for_regime, lubrication_oracle,
                                   mean_flow_from_speed,
                                   mean_flow_from_wavelength, mixture_density,
                                   reynolds_report, simulate_transport,
                                   sweep_transport)
from peristalsim.waveforms import (ALL_IN_PHASE, PERISTALTIC,
                                   SEQUENTIAL_SQUEEZE, WaveCommand,
                                   compose_pattern)

# Published mixture properties at 22 degC: Cm -> (density g/cm^3, mu cP, Re)
MIXTURE_TABLE = {
    0.5: (1.12, 5.57, 0.6427),
    0.7: (1.17, 20.88, 0.1799),
    0.8: (1.20, 53.96, 0.0714),
    0.9: (1.23, 193.24, 0.0204),
    0.95: (1.24, 438.10, 0.0091),
    1.0: (1.26, 1178.64, 0.0034),
}


def test_viscosity_against_published_table():
    for cm, (_, mu_cp, _) in MIXTURE_TABLE.items():
        assert cheng_viscosity(cm, 22.0) * 1e3 == pytest.approx(mu_cp, rel=0.02)


def test_pure_glycerin_anchor():
    assert cheng_viscosity(1.0, 22.0) * 1e3 == pytest.approx(1178.64, rel=1e-3)


def test_water_viscosity_at_twenty():
    assert cheng_viscosity(0.0, 20.0) * 1e3 == pytest.approx(1.00, rel=0.01)


def test_viscosity_monotone():
    cms = np.linspace(0.0, 1.0, 21)
    mus = [cheng_viscosity(float(c), 22.0) for c in cms]
    assert all(b > a for a, b in zip(mus, mus[1:]))
    temps = np.linspace(5.0, 90.0, 18)
    mus_t = [cheng_viscosity(0.8, float(t)) for t in temps]
    assert all(b < a for a, b in zip(mus_t, mus_t[1:]))


def test_viscosity_domain():
    with pytest.raises(DomainError):
        cheng_viscosity(1.2, 22.0)
    with pytest.raises(DomainError):
        cheng_viscosity(0.5, 150.0)


def test_density_against_published_table():
    for cm, (rho_ref, _, _) in MIXTURE_TABLE.items():
        assert mixture_density(cm, 22.0) / 1e3 == pytest.approx(rho_ref,
                                                                rel=0.01)
    assert mixture_density(1.0) == pytest.approx(1260.0)
    assert mixture_density(0.0) == pytest.approx(998.0)


def test_mean_flow_zero_occlusion():
    assert mean_flow_from_speed(3e-3, 0.0, 0.044) == 0.0


def test_mean_flow_full_occlusion_identity():
    # at b = a the mean flow equals c times pi*(a^2 + a^2/2)
    a, c = 3e-3, 0.044
    q = mean_flow_from_speed(a, a, c)
    assert q == pytest.approx(1.5 * math.pi * c * a * a, rel=1e-12)
    assert q == pytest.approx(c * math.pi * (a * a + a * a / 2.0), rel=1e-12)


def test_mean_flow_near_one_ml_per_min():
    q = mean_flow_from_speed(3e-3, 0.17e-3, 0.044)
    assert q * 60e6 == pytest.approx(0.954, abs=2e-3)


def test_mean_flow_domain():
    with pytest.raises(DomainError):
        mean_flow_from_speed(3e-3, 4e-3, 0.044)
    with pytest.raises(DomainError):
        mean_flow_from_speed(3e-3, 1e-3, -1.0)


def test_wavelength_path_equals_speed_path():
    rng = np.random.default_rng(3)
    for _ in range(300):
        a = float(rng.uniform(1e-3, 8e-3))
        b = float(rng.uniform(0.0, a))
        lam = float(rng.uniform(0.01, 1.0))
        f = float(rng.uniform(0.05, 5.0))
        q1 = mean_flow_from_wavelength(a, b, lam, f)
        q2 = mean_flow_from_speed(a, b, lam * f)
        assert q1 == q2  # identical substitution, bit for bit


def test_flow_linear_in_wavelength_and_frequency():
    a, b = 3e-3, 1.7e-4
    q1 = mean_flow_from_wavelength(a, b, 0.11, 0.2)
    q2 = mean_flow_from_wavelength(a, b, 0.22, 0.2)
    assert q2 == pytest.approx(2.0 * q1, rel=1e-12)
    q5 = mean_flow_from_wavelength(a, b, 0.11, 0.5)
    assert q5 / q1 == pytest.approx(2.5, rel=1e-12)


def test_flow_strictly_increasing_in_each_argument():
    a = 3e-3
    bs = np.linspace(1e-5, a, 25)
    qs = [mean_flow_from_speed(a, float(b), 0.05) for b in bs]
    assert all(y > x for x, y in zip(qs, qs[1:]))
    cs = np.linspace(0.01, 0.2, 25)
    qc = [mean_flow_from_speed(a, 1e-4, float(c)) for c in cs]
    assert all(y > x for x, y in zip(qc, qc[1:]))


def test_oracle_matches_closed_form_across_occlusions():
    a, lam, f, mu = 3e-3, 0.22, 0.2, 1.179
    for ratio in np.arange(0.05, 0.95, 0.05):
        b = float(ratio) * a
        q_oracle = lubrication_oracle(a, b, lam, f, mu)
        q_formula = mean_flow_from_speed(a, b, lam * f)
        assert q_oracle == pytest.approx(q_formula, rel=0.01)


def test_oracle_viscosity_independent():
    # three decades of viscosity move the result by far less than 0.1%
    a, b, lam, f = 3e-3, 1.5e-3, 0.22, 0.2
    flows = [lubrication_oracle(a, b, lam, f, mu_cp * 1e-3)
             for mu_cp in (1.179, 11.79, 117.9, 1179.0)]
    spread = (max(flows) - min(flows)) / flows[0]
    assert spread < 1e-3


def test_oracle_vanishing_occlusion():
    q = lubrication_oracle(3e-3, 1e-9, 0.22, 0.2, 1.0)
    assert abs(q) < 1e-12


def test_oracle_rejects_full_occlusion():
    with pytest.raises(DomainError):
        lubrication_oracle(3e-3, 3e-3, 0.22, 0.2, 1.0)


def test_reynolds_anchor_and_cross_row_ratio():
    a = 3e-3
    # reference flow with v*D = 3.18e-6 m^2/s through the 3 mm vein
    q_ref = 3.18e-6 * math.pi * a / 2.0
    re_1 = reynolds_report(FluidSpec(glycerin_mass_fraction=1.0), q_ref, a)
    assert re_1 == pytest.approx(0.0034, rel=0.01)
    re_05 = reynolds_report(FluidSpec(glycerin_mass_fraction=0.5), q_ref, a)
    table_ratio = MIXTURE_TABLE[0.5][2] / MIXTURE_TABLE[1.0][2]
    assert re_05 / re_1 == pytest.approx(table_ratio, rel=0.02)
    assert reynolds_report(FluidSpec(), 0.0, a) == 0.0


def test_flow_for_regime_anchors():
    limb = LimbModel()
    lam, q = flow_for_regime(limb, 0.2, 0.25)
    assert lam == pytest.approx(0.22)
    assert q * 60e6 == pytest.approx(1.0, rel=1e-3)
    # beyond the critical wavelength the flow declines
    lam44, q44 = flow_for_regime(limb, 0.2, 0.125)
    assert lam44 == pytest.approx(0.44)
    assert q44 < q
    # all-in-phase baseline
    lam0, q0 = flow_for_regime(limb, 0.2, 0.0)
    assert math.isinf(lam0) and q0 == 0.0


def test_flow_for_regime_clamp_disabled():
    limb = LimbModel(lambda_crit=math.inf)
    lam44, q44 = flow_for_regime(limb, 0.2, 0.125)
    lam22, q22 = flow_for_regime(limb, 0.2, 0.25)
    assert q44 == pytest.approx(2.0 * q22, rel=1e-12)


def _schedule(kind, **kw):
    act, crank, manifold = ActuatorSpec(), CrankSpec(), Manifold()
    squeeze = kw.pop("squeeze_time", None)
    base = dict(amplitude=crank.alpha_half_range, frequency=0.2,
                onset_delay=0.25, duration=20.0)
    base.update(kw)
    cmd = WaveCommand(**base)
    return compose_pattern(kind, cmd, act, crank, manifold,
                           squeeze_time=squeeze)


def test_simulate_transport_peak_regime():
    limb, fluid = LimbModel(), FluidSpec()
    result = simulate_transport(limb, fluid, _schedule(PERISTALTIC))
    assert result.wavelength == pytest.approx(0.22)
    assert result.mean_flow * 60e6 == pytest.approx(1.0, rel=5e-3)
    assert result.cumulative_volume == pytest.approx(
        result.mean_flow * 20.0, rel=1e-12)
    # trace integrates to the cumulative volume
    integral = float(np.sum(result.trace) * 0.01)
    assert integral == pytest.approx(result.cumulative_volume, rel=1e-9)


def test_simulate_transport_all_in_phase_zero():
    limb, fluid = LimbModel(), FluidSpec()
    result = simulate_transport(limb, fluid,
                                _schedule(ALL_IN_PHASE, onset_delay=0.0))
    assert result.mean_flow == 0.0
    assert result.cumulative_volume == 0.0


def test_simulate_transport_sequential_squeeze():
    limb, fluid = LimbModel(), FluidSpec()
    result = simulate_transport(limb, fluid,
                                _schedule(SEQUENTIAL_SQUEEZE, squeeze_time=1.0,
                                          duration=16.0))
    # effective wave: one pitch per squeeze interval
    assert result.wavelength == pytest.approx(2.0 * 1.1e-2)
    assert result.mean_flow > 0.0


def test_transport_sweep_shape_and_trends():
    limb = LimbModel()
    delta_ts = [0.0, 0.125, 0.25, 0.375, 0.5]
    rows = sweep_transport(limb, delta_ts, [0.2, 0.5], [1.0])
    assert len(rows) == len(delta_ts) * 2
    by_f = {}
    for row in rows:
        by_f.setdefault(row["frequency_hz"], {})[row["delta_t_ms"]] = row
    # flow at 0.5 Hz exceeds 0.2 Hz at every shared wavelength
    for dt_ms, row in by_f[0.2].items():
        if math.isfinite(row["wavelength_m"]):
            lam = row["wavelength_m"]
            match = [r for r in rows
                     if r["frequency_hz"] == 0.5
                     and math.isfinite(r["wavelength_m"])
                     and abs(r["wavelength_m"] - lam) < 1e-12]
            for other in match:
                assert other["qbar_m3s"] > row["qbar_m3s"]
    # viscosity varies across Cm at fixed regime while flow does not
    rows_cm = sweep_transport(limb, [0.25], [0.2], [0.5, 1.0])
    assert rows_cm[0]["qbar_m3s"] == rows_cm[1]["qbar_m3s"]
    assert rows_cm[0]["mu_cP"] != rows_cm[1]["mu_cP"]
    assert rows_cm[0]["reynolds"] != rows_cm[1]["reynolds"]


def test_limb_model_validation():
    with pytest.raises(DomainError):
        LimbModel(occlusion_amplitude=4e-3)  # beyond the vein radius
    with pytest.raises(DomainError):
        LimbModel(vein_mean_radius=0.0)
