import math
import time

import numpy as np
import pytest

from magnonsteer import (
    Axis,
    NoCrossing,
    NonMonotone,
    SpecError,
    SweepSpec,
    UnknownPreset,
    default_params,
    effective_coupling,
    find_threshold,
    format_csv,
    preset,
    run_point,
    run_sweep,
    spec_from_dict,
)
from magnonsteer.sweep import PRESET_IDS, PointResult, grid_points
import magnonsteer.sweep as sweep_module


def small_spec(**axis_kwargs):
    axis = Axis("temperature", **{"start": 0.0, "stop": 0.4, "count": 5, **axis_kwargs})
    return SweepSpec(base=default_params(epsilon=0.0), axis1=axis,
                     outputs=("LN_qm", "LN_cm"))


class TestRunPoint:
    def test_no_feedback_defaults(self):
        flat = run_point(default_params(epsilon=0.0)).to_flat_dict()
        assert flat["status"] == "ok"
        assert flat["LN_qm"] > 0
        assert flat["LN_cm"] == 0.0
        assert flat["LN_cq"] == 0.0

    def test_feedback_entangles_cavity_pairs(self):
        flat = run_point(default_params(epsilon=0.86)).to_flat_dict()
        assert flat["LN_qm"] > 0
        assert flat["LN_cm"] > 0
        assert flat["LN_cq"] > 0

    def test_thermal_death_of_pair_measures(self):
        flat = run_point(default_params(epsilon=0.86, temperature=10.0)).to_flat_dict()
        for a, b in (("c", "q"), ("c", "m"), ("q", "m")):
            assert flat[f"LN_{a}{b}"] == 0.0
            assert flat[f"G_{a}_to_{b}"] == 0.0
            assert flat[f"G_{b}_to_{a}"] == 0.0

    def test_thermal_death_of_every_measure_with_consistent_noise(self):
        flat = run_point(default_params(epsilon=0.86, temperature=10.0,
                                        diffusion_mode="consistent")).to_flat_dict()
        for key, value in flat.items():
            if key.startswith(("LN_", "G_")):
                assert value == 0.0, key

    def test_diagnostics_present(self):
        result = run_point(default_params(epsilon=0.0))
        assert result.lyap_residual is not None and result.lyap_residual >= 0
        assert result.min_symplectic_eig is not None

    def test_unstable_point_is_structured(self):
        result = run_point(default_params(drive_power=1e4, g_q=0.2e6))
        assert result.status == "unstable"
        assert result.report is None
        assert result.max_real_part > 0


class TestAxisAndSpec:
    def test_axis_linspace(self):
        axis = Axis("temperature", 0.0, 1.0, 5)
        assert np.allclose(axis.grid(), [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_axis_explicit_values(self):
        axis = Axis("temperature", values=(1e-4, 0.01, 0.03))
        assert np.allclose(axis.grid(), [1e-4, 0.01, 0.03])

    def test_axis_validation(self):
        with pytest.raises(SpecError):
            Axis("temperature", 0.0, 1.0, 1)
        with pytest.raises(SpecError):
            Axis("temperature", 1.0, 0.0, 5)
        with pytest.raises(SpecError):
            Axis("magic_knob", 0.0, 1.0, 5)
        with pytest.raises(SpecError):
            Axis("diffusion_mode", 0.0, 1.0, 5)

    def test_material_parameters_are_sweepable(self):
        spec = SweepSpec(
            base=default_params(epsilon=0.0),
            axis1=Axis("sphere_radius", values=(50e-6, 125e-6, 200e-6)),
            outputs=("LN_qm",),
        )
        rows = run_sweep(spec)
        # a small sphere boosts the parametric coupling past the damping and
        # destabilises the dynamics; bigger spheres entangle ever more weakly
        assert rows[0]["status"] == "unstable"
        assert rows[1]["LN_qm"] > rows[2]["LN_qm"] > 0

    def test_spec_rejects_unknown_outputs(self):
        with pytest.raises(SpecError):
            SweepSpec(base=default_params(), axis1=Axis("temperature", 0.0, 1.0, 3),
                      outputs=("LN_xy",))

    def test_spec_rejects_duplicate_axes(self):
        with pytest.raises(SpecError):
            SweepSpec(base=default_params(),
                      axis1=Axis("temperature", 0.0, 1.0, 3),
                      axis2=Axis("temperature", 0.0, 1.0, 3))

    def test_grid_points_order(self):
        spec = SweepSpec(
            base=default_params(),
            axis1=Axis("temperature", 0.0, 0.1, 2),
            axis2=Axis("epsilon", values=(0.0, 0.5)),
        )
        points = grid_points(spec)
        combos = [(p.epsilon, p.temperature) for p in points]
        assert combos == [(0.0, 0.0), (0.0, 0.1), (0.5, 0.0), (0.5, 0.1)]

    def test_spec_from_dict(self):
        spec = spec_from_dict({
            "base": {"epsilon": 0.5},
            "axis1": {"param": "temperature", "start": 0.0, "stop": 0.2, "count": 3},
            "outputs": ["LN_qm"],
        })
        assert spec.base.epsilon == 0.5
        assert spec.outputs == ("LN_qm",)

    def test_spec_from_dict_rejects_garbage(self):
        with pytest.raises(SpecError):
            spec_from_dict({"axis1": {"param": "temperature", "start": 0, "stop": 1,
                                      "count": 3}, "bogus": 1})
        with pytest.raises(SpecError):
            spec_from_dict({"outputs": ["LN_qm"]})
        with pytest.raises(SpecError):
            spec_from_dict({"axis1": {"start": 0, "stop": 1, "count": 3}})
        with pytest.raises(SpecError):
            spec_from_dict([1, 2])


class TestRunSweep:
    def test_two_point_axis_structure(self):
        rows = run_sweep(small_spec(count=2))
        assert len(rows) == 2
        assert list(rows[0]) == ["temperature", "LN_qm", "LN_cm",
                                 "lyap_residual", "min_symplectic_eig", "status"]
        assert all(row["status"] == "ok" for row in rows)

    def test_unstable_rows_have_blank_values(self):
        spec = SweepSpec(
            base=default_params(g_q=0.2e6),
            axis1=Axis("drive_power", 1e-3, 1e4, 3),
            outputs=("LN_qm",),
        )
        rows = run_sweep(spec)
        assert rows[-1]["status"] == "unstable"
        assert rows[-1]["LN_qm"] is None
        assert rows[0]["status"] == "ok"

    def test_deterministic_across_worker_counts(self, monkeypatch):
        spec = small_spec(count=6)
        monkeypatch.setenv("MAGNONSTEER_THREADS", "1")
        serial = format_csv(run_sweep(spec))
        monkeypatch.setenv("MAGNONSTEER_THREADS", "4")
        threaded = format_csv(run_sweep(spec))
        assert serial == threaded

    def test_csv_formatting(self):
        text = format_csv([
            {"temperature": 0.1, "LN_qm": 0.123456789012345, "status": "ok"},
            {"temperature": 0.2, "LN_qm": None, "status": "unstable"},
        ])
        lines = text.strip().split("\n")
        assert lines[0] == "temperature,LN_qm,status"
        assert lines[1] == "0.1,0.123456789012,ok"
        assert lines[2] == "0.2,,unstable"

    def test_rows_pass_physicality_without_feedback(self):
        rows = run_sweep(small_spec(count=4))
        for row in rows:
            assert row["min_symplectic_eig"] >= 0.5 - 1e-10

    def test_two_dimensional_sweep_structure(self):
        spec = SweepSpec(
            base=default_params(),
            axis1=Axis("temperature", 0.0, 0.1, 2),
            axis2=Axis("epsilon", values=(0.0, 0.5)),
            outputs=("LN_qm",),
        )
        rows = run_sweep(spec)
        assert len(rows) == 4
        assert list(rows[0])[:2] == ["temperature", "epsilon"]
        text = format_csv(rows)
        assert text.startswith("temperature,epsilon,LN_qm")
        assert len(text.strip().split("\n")) == 5


class TestFindThreshold:
    def test_fig3a_entanglement_death(self):
        value = find_threshold(preset("fig3a"), "LN_qm")
        assert 0.2 * 0.7 <= value <= 0.2 * 1.3

    def test_constant_zero_measure(self):
        with pytest.raises(NoCrossing):
            find_threshold(preset("fig3a"), "LN_cm")

    def test_never_vanishing_measure(self):
        spec = SweepSpec(base=default_params(epsilon=0.0),
                         axis1=Axis("temperature", 0.0, 0.05, 8),
                         outputs=("LN_qm",))
        with pytest.raises(NoCrossing):
            find_threshold(spec, "LN_qm")

    def test_ordered_thresholds_for_cavity_qubit_pair(self):
        # the steered-cavity direction outlives the steered-qubit direction
        spec = SweepSpec(base=default_params(epsilon=0.86),
                         axis1=Axis("temperature", 0.0, 4.0, 60),
                         outputs=("G_c_to_q", "G_q_to_c"))
        qubit_steered = find_threshold(spec, "G_c_to_q")
        cavity_steered = find_threshold(spec, "G_q_to_c")
        assert qubit_steered < cavity_steered

    def test_revival_raises_nonmonotone(self, monkeypatch):
        profile = {0.0: 1.0, 0.1: 0.0, 0.2: 1.0, 0.3: 0.0}

        def fake_run_point(params):
            report = run_point(default_params(epsilon=0.0)).report
            value = profile[round(params.temperature, 3)]
            patched = dict(report.ln_pairs, qm=value)
            object.__setattr__(report, "ln_pairs", patched)
            return PointResult(status="ok", report=report,
                               lyap_residual=0.0, min_symplectic_eig=0.5)

        monkeypatch.setattr(sweep_module, "run_point", fake_run_point)
        spec = SweepSpec(base=default_params(epsilon=0.0),
                         axis1=Axis("temperature", 0.0, 0.3, 4),
                         outputs=("LN_qm",))
        with pytest.raises(NonMonotone):
            find_threshold(spec, "LN_qm")

    def test_rising_direction(self):
        # cavity-magnon entanglement turns on as the reflectivity grows
        spec = SweepSpec(base=default_params(temperature=10e-3),
                         axis1=Axis("epsilon", 0.0, 0.95, 40),
                         outputs=("LN_cm",))
        onset = find_threshold(spec, "LN_cm", direction="rising")
        assert 0.0 < onset < 0.95
        above = run_point(spec.base.replace(epsilon=onset + 0.05)).to_flat_dict()
        below = run_point(spec.base.replace(epsilon=max(onset - 0.05, 0.0))).to_flat_dict()
        assert above["LN_cm"] > 0
        assert below["LN_cm"] == 0.0

    def test_requires_one_dimensional_spec(self):
        spec = SweepSpec(base=default_params(),
                         axis1=Axis("temperature", 0.0, 0.1, 2),
                         axis2=Axis("epsilon", values=(0.0, 0.5)))
        with pytest.raises(SpecError):
            find_threshold(spec, "LN_qm")

    def test_rejects_unknown_measure_and_direction(self):
        with pytest.raises(SpecError):
            find_threshold(small_spec(), "LN_zz")
        with pytest.raises(SpecError):
            find_threshold(small_spec(), "LN_qm", direction="sideways")


class TestPresets:
    def test_all_ids_build(self):
        for preset_id in PRESET_IDS:
            spec = preset(preset_id)
            assert spec.preset_id == preset_id
            assert spec.outputs

    def test_unknown_preset(self):
        with pytest.raises(UnknownPreset):
            preset("fig99")

    def test_fig3a_fig3b_differ_only_in_reflectivity(self):
        spec_a, spec_b = preset("fig3a"), preset("fig3b")
        assert spec_a.base.epsilon == 0.0
        assert spec_b.base.epsilon == 0.86
        assert spec_a.base.replace(epsilon=0.86) == spec_b.base
        assert spec_a.axis1 == spec_b.axis1
        assert spec_a.outputs == ("LN_cm", "LN_cq", "LN_qm")

    def test_fig2_parameters(self):
        spec = preset("fig2")
        coupling = effective_coupling(spec.base)
        assert spec.base.epsilon == 0.86
        assert spec.base.theta == math.pi
        assert spec.base.g_q == pytest.approx(2 * coupling, rel=1e-12)
        assert "G_c_to_q" in spec.outputs and "class_cq" in spec.outputs

    def test_fig5_series(self):
        spec = preset("fig5")
        assert spec.axis1.param == "epsilon"
        assert (spec.axis1.start, spec.axis1.stop) == (0.0, 0.95)
        assert spec.axis2.param == "temperature"
        assert spec.axis2.values == (0.1e-3, 10e-3, 30e-3)
        assert "R_min" in spec.outputs

    def test_fig6_fixed_temperature(self):
        spec = preset("fig6")
        assert spec.base.temperature == 10e-3
        assert spec.axis1.param == "epsilon"
        assert spec.outputs == ("LN_cm", "LN_cq", "LN_qm")

    def test_fig10_fig11_monogamy_setup(self):
        for preset_id, prefix in (("fig10", "mono_out"), ("fig11", "mono_in")):
            spec = preset(preset_id)
            coupling = effective_coupling(spec.base)
            assert spec.base.epsilon == 0.90
            assert spec.base.g_q == pytest.approx(1.5 * coupling, rel=1e-12)
            assert any(key.startswith(prefix) for key in spec.outputs)

    def test_small_preset_sweep_runs(self):
        spec = preset("fig3a")
        trimmed = SweepSpec(base=spec.base,
                            axis1=Axis("temperature", 0.0, 0.8, 9),
                            outputs=spec.outputs)
        rows = run_sweep(trimmed)
        assert len(rows) == 9
        assert all(row["LN_cm"] == 0.0 for row in rows)

    def test_preset_sweep_performance(self):
        start = time.monotonic()
        rows = run_sweep(preset("fig3a"))
        elapsed = time.monotonic() - start
        assert len(rows) == 200
        assert elapsed < 2.0
