import warnings

import numpy as np
import pytest

from utils.core.exceptions import BatchError, ExperimentError, IllConditionedWarning, InvalidArgumentError
from utils.experiments import (
    EpsilonSweep,
    ExperimentRegistry,
    StudyMethod,
    TangentSource,
    closed_tangential_test,
    epsilon_sweep,
    fd_tangent_baseline,
    open_tangential_test,
    registry,
    static_error_study,
)
from utils.experiments.jobs import SIMULATION_PRESETS, merge_documents
from utils.experiments.shapes import (
    TestShapeConfig,
    max_pointwise_l2,
    perturbed_derivatives,
    perturbed_shape,
    reference_geometry,
    richardson_derivatives,
)
from utils.experiments.tangential import circle_position, circle_tangent, marker_line, total_variation
from utils.orchestration import ExperimentOrchestrator


def test_perturbed_shape_values():
    assert perturbed_shape(0.0) == (0.0, 0.0)
    x, y = perturbed_shape(0.25)
    # |sin| = 1 at lambda = 1/4
    assert y == pytest.approx(0.05 * (1 + 0.04 * np.exp(-1 / 0.9)))
    xs, ys = perturbed_shape(np.linspace(0, 1, 5))
    assert ys.shape == (5,)


def test_closed_form_derivatives_match_richardson():
    lam = np.linspace(0.1, 0.4, 13)
    _, y1, y2 = perturbed_derivatives(lam)
    d1, d2 = richardson_derivatives(lam)
    np.testing.assert_allclose(d1, y1, rtol=1e-6, atol=1e-7)
    np.testing.assert_allclose(d2, y2, rtol=1e-6, atol=1e-6)


def test_reference_geometry_normals_are_unit():
    positions, normals, second = reference_geometry(np.linspace(0, 1, 30), TestShapeConfig(b=0.2))
    np.testing.assert_allclose(np.linalg.norm(normals, axis=1), 1.0)
    assert np.all(normals[:, 1] < 0)
    assert np.all(second[:, 0] == 0.0)
    assert positions.shape == (30, 2)


def test_max_pointwise_l2_matches_loop(rng):
    a, b = rng.standard_normal((20, 2)), rng.standard_normal((20, 2))
    expected = max(np.sqrt((a[j, 0] - b[j, 0]) ** 2 + (a[j, 1] - b[j, 1]) ** 2) for j in range(20))
    assert max_pointwise_l2(a, b) == pytest.approx(expected)
    assert max_pointwise_l2(np.array([1.0, -3.0]), np.zeros(2)) == 3.0


def test_kernel_errors_converge():
    report = static_error_study(StudyMethod.SBF, "kte", [8, 16, 32])
    assert report.n_d == [8, 16, 32]
    assert report.epsilon == [7.0, 7.0, 7.0]
    assert report.value_errors[2] < report.value_errors[0] / 10
    assert report.normal_errors[2] < report.normal_errors[0]
    frame = report.to_frame()
    assert list(frame.columns) == [
        "method", "node_kind", "n_d", "epsilon", "value_error", "normal_error", "second_derivative_error",
    ]


def test_lagrange_and_fd_studies():
    lagrange = static_error_study("lagrange_chebyshev", "chebyshev", [8, 32], n_s=200)
    assert lagrange.epsilon == [None, None]
    assert lagrange.value_errors[1] < lagrange.value_errors[0]
    fd = static_error_study("fd_baseline", "kte", [16, 64], n_s=200)
    assert fd.node_kind == "equispaced"
    assert fd.value_errors[1] < fd.value_errors[0] / 4


def test_per_n_d_epsilon_list():
    report = static_error_study("rbf", "kte", [8, 16], epsilon=[3.0, 5.0], n_s=100)
    assert report.epsilon == [3.0, 5.0]
    with pytest.raises(InvalidArgumentError):
        static_error_study("rbf", "kte", [8, 16], epsilon=[3.0], n_s=100)


def test_progress_callback():
    seen = []
    static_error_study("rbf", "kte", [8, 12], n_s=50, progress=seen.append)
    assert seen == [0.5, 1.0]


def test_epsilon_sweep_picks_minimum():
    sweep = epsilon_sweep("rbf", "kte", 16, [1.0, 3.0, 7.0, 12.0], n_s=100, rtol=0.0)
    assert sweep.best_epsilon in (1.0, 3.0, 7.0, 12.0)
    assert sweep.best_error == np.min(sweep.errors)
    assert sweep.min_error == sweep.best_error
    frame = sweep.to_frame()
    assert frame["is_best"].sum() == 1
    assert frame.loc[frame["is_best"], "epsilon"].item() == sweep.best_epsilon
    with pytest.raises(InvalidArgumentError):
        epsilon_sweep("lagrange_chebyshev", "chebyshev", 16)


def test_near_optimal_pick_prefers_the_largest_shape_parameter():
    epsilons = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    errors = np.array([1.0, 0.5, 0.504, 0.6, np.inf])
    sweep = EpsilonSweep(StudyMethod.SBF, "kte", 8, epsilons, errors, rtol=0.01)
    assert sweep.best_epsilon == 3.0
    assert sweep.best_error == 0.504
    assert sweep.min_error == 0.5
    assert EpsilonSweep(StudyMethod.SBF, "kte", 8, epsilons, errors, rtol=0.0).best_epsilon == 2.0
    failed = EpsilonSweep(StudyMethod.SBF, "kte", 8, epsilons, np.full(5, np.inf), rtol=0.01)
    assert failed.best_index == 0
    with pytest.raises(InvalidArgumentError):
        epsilon_sweep("sbf", "kte", 8, [2.0], n_s=20, rtol=-0.1)


def test_sweeps_do_not_warn_or_touch_warning_filters(monkeypatch):
    monkeypatch.setenv("RBFSTOKES_INTERPOLATION_CONDITION_THRESHOLD", "10")
    before = list(warnings.filters)
    with warnings.catch_warnings():
        warnings.simplefilter("error", IllConditionedWarning)
        sweep = epsilon_sweep("sbf", "kte", 12, [2.0, 4.0], n_s=50)
    assert np.all(np.isfinite(sweep.errors))
    assert list(warnings.filters) == before


def test_best_shape_parameter_beats_fixed_epsilon_at_small_n_d():
    sweep = epsilon_sweep("sbf", "kte", 8)
    fixed = static_error_study("sbf", "kte", [8])
    assert sweep.best_error < fixed.value_errors[0]


@pytest.mark.slow
@pytest.mark.parametrize("n_d, expected", [(8, 2.5), (32, 3.8), (64, 8.2)])
def test_best_shape_parameters_match_published_values(n_d, expected):
    sweep = epsilon_sweep("sbf", "kte", n_d)
    assert sweep.epsilons.size == 100
    assert sweep.best_epsilon == pytest.approx(expected, rel=0.3)


def test_kernel_studies_agree_and_converge():
    n_d = [8, 16, 24, 32, 40, 48, 56, 64, 72, 80]
    sbf = static_error_study("sbf", "kte", n_d)
    rbf = static_error_study("rbf", "kte", n_d)
    for name in ("value_errors", "normal_errors", "second_derivative_errors"):
        ratio = np.array(getattr(sbf, name)) / np.array(getattr(rbf, name))
        assert np.all((ratio > 1 / 3) & (ratio < 3)), name
    for report in (sbf, rbf):
        second = report.second_derivative_errors
        assert np.log10(second[0] / second[-1]) >= 3
    lagrange = static_error_study("lagrange_chebyshev", "chebyshev", [64])
    assert sbf.second_derivative_errors[n_d.index(64)] < lagrange.second_derivative_errors[0]


def test_marker_line_and_total_variation():
    markers = marker_line()
    assert markers.shape == (100, 2)
    assert markers[0].tolist() == [0.4, 0.2]
    assert markers[-1, 0] == pytest.approx(1.8)
    assert total_variation([0.0, 1.0, 0.0, 2.0]) == 4.0


def test_fd_tangents_are_second_order():
    errors = []
    for n_s in (100, 200):
        nodes, positions, tangents = fd_tangent_baseline(n_s)
        np.testing.assert_allclose(positions, circle_position(nodes.values))
        errors.append(np.max(np.linalg.norm(tangents - circle_tangent(nodes.values), axis=1)))
    assert 3.5 < errors[0] / errors[1] < 4.5


def test_closed_analytic_self_comparison_is_exact():
    report = closed_tangential_test(n_s=100, tangent_source="analytic")
    assert all(v == 0.0 for v in report.summary().values())


def test_closed_sbf_beats_finite_differences():
    sbf = closed_tangential_test()
    fd = closed_tangential_test(tangent_source=TangentSource.FD)
    assert sbf.summary()["max_p_error"] < 1e-4
    assert fd.summary()["max_p_error"] > sbf.summary()["max_p_error"]
    assert sbf.config["delta"] == pytest.approx(4 * np.pi / 400)
    frame = sbf.to_frame()
    assert list(frame.columns) == ["x", "y", "p_error", "u_error", "v_error"]


def test_closed_sbf_error_is_smoother_than_finite_differences():
    sbf = closed_tangential_test()
    fd = closed_tangential_test(tangent_source=TangentSource.FD)
    assert sbf.summary()["p_error_total_variation"] < fd.summary()["p_error_total_variation"]


def test_closed_error_decays_away_from_the_circle():
    # at N_d = 25 the SBF error is at round-off, so the trend is checked on a coarser curve
    report = closed_tangential_test(n_d=15)
    assert report.decay_slope() < 0
    assert report.summary()["p_error_decay_slope"] == report.decay_slope()
    errors = report.pressure_error[report.markers[:, 0] >= 1.0]
    assert errors[-1] < errors[0]


def _interpolation_maxima(report):
    pressure, velocity = report.interpolation_error()
    return np.array([pressure.max(), velocity[:, 0].max(), velocity[:, 1].max()])


def test_open_kte_nodes_and_sbf_give_smaller_interpolation_errors():
    kte = _interpolation_maxima(open_tangential_test(node_kind="kte"))
    chebyshev = _interpolation_maxima(open_tangential_test(node_kind="chebyshev"))
    rbf = _interpolation_maxima(open_tangential_test(node_kind="kte", tangent_source="rbf"))
    assert np.all(kte <= chebyshev)
    assert np.all(kte <= rbf)


def test_open_tangential_report():
    report = open_tangential_test(n_d=20, n_s=50, markers=marker_line(count=10))
    frame = report.to_frame()
    assert {"p_interp_error", "u_interp_error", "v_interp_error"} <= set(frame.columns)
    assert len(frame) == 10
    assert report.config["n_ref"] == 200
    with pytest.raises(InvalidArgumentError):
        open_tangential_test(tangent_source="fd")


def test_registry_contents():
    assert set(registry.names()) == {"interp-error", "eps-sweep", "stokeslet-test", "simulate", "fd-baseline"}
    first, second = registry.create("simulate"), registry.create("simulate")
    assert first is not second
    assert registry.describe()["fd-baseline"]
    with pytest.raises(KeyError):
        ExperimentRegistry().create("nope")


def test_run_document_wraps_failures():
    experiment = registry.create("interp-error")
    statuses = []
    experiment.set_status_callback(lambda status, progress: statuses.append(status))
    with pytest.raises(ExperimentError):
        experiment.run_document({"n_s": 1})
    assert statuses[-1].startswith("Error:")
    with pytest.raises(ExperimentError):
        registry.create("stokeslet-test").run_document({"case": "open", "tangent_sources": ["fd"]})


def test_default_configs_round_trip():
    for name in registry.names():
        experiment = registry.create(name)
        assert experiment.parse_config(experiment.default_config()) is not None


def test_interp_error_experiment():
    result = registry.create("interp-error").run_document(
        {"methods": ["sbf", "lagrange_chebyshev", "fd_baseline"], "n_d": [8, 16], "n_s": 50}
    )
    assert len(result.table) == 6
    assert set(result.summary) == {"sbf", "lagrange_chebyshev", "fd_baseline"}
    assert set(result.table["node_kind"]) == {"kte", "chebyshev", "equispaced"}


def test_eps_sweep_experiment():
    result = registry.create("eps-sweep").run_document(
        {"n_d": [8], "epsilon_range": [1.0, 8.0], "epsilon_count": 4, "n_s": 50}
    )
    assert len(result.table) == 4
    best = result.summary["best"]["8"]
    assert set(best) == {"epsilon", "value_error", "min_value_error"}
    assert best["value_error"] <= 1.01 * best["min_value_error"]


def test_stokeslet_test_experiment():
    result = registry.create("stokeslet-test").run_document(
        {"case": "closed", "n_s": 100, "fd_ib_points": 200, "marker_count": 10}
    )
    assert {"sbf", "fd_200", "delta"} <= set(result.summary)
    assert len(result.table) == 20


def test_simulate_experiment():
    overrides = {"N_d": 12, "N_s": 24, "t_end": 0.005, "output_every": 5}
    result = registry.create("simulate").run_document({"case": "closed", "overrides": overrides})
    assert result.summary["frames"] == 2
    assert result.summary["error"] is None
    assert list(result.table.columns) == ["t", "lambda", "x", "y"]
    assert len(result.table) == 24
    assert "diagnostics" in result.extra_tables


def test_fd_baseline_experiment():
    result = registry.create("fd-baseline").run_document(
        {"n_s": [50, 100], "static_n_d": [8, 16], "n_samples": 50}
    )
    assert result.summary["mean_refinement_ratio"] == pytest.approx(4.0, rel=0.1)
    assert len(result.extra_tables["static"]) == 2


def test_merge_documents():
    merged = merge_documents(SIMULATION_PRESETS["open"], {"blob": {"mu": 2.0}, "N_d": 30})
    assert merged["blob"] == {"delta": "2/N_s", "mu": 2.0}
    assert merged["N_d"] == 30
    assert SIMULATION_PRESETS["open"]["blob"]["mu"] == 1.0


def test_orchestrator_runs_jobs_concurrently():
    orchestrator = ExperimentOrchestrator()
    seen = []
    orchestrator.set_status_handler("1:fd-baseline", lambda status, progress: seen.append(status))
    results = orchestrator.run([
        ("interp-error", {"methods": ["rbf"], "n_d": [8], "n_s": 50}),
        ("fd-baseline", {"n_s": [50, 100], "static_n_d": [8], "n_samples": 50}),
    ])
    assert [r.name for r in results] == ["interp-error", "fd-baseline"]
    assert seen[-1] == "Complete"


def test_orchestrator_rejects_unknown_experiment():
    with pytest.raises(ExperimentError):
        ExperimentOrchestrator().run([("nope", None)])


def test_orchestrator_keeps_results_when_a_job_fails():
    orchestrator = ExperimentOrchestrator()
    with pytest.raises(BatchError) as info:
        orchestrator.run([
            ("fd-baseline", {"n_s": [50, 100], "static_n_d": [8], "n_samples": 50}),
            ("interp-error", {"n_s": 1}),
        ])
    error = info.value
    assert error.results[0].name == "fd-baseline"
    assert error.results[1] is None
    assert list(error.failures) == ["1:interp-error"]
    assert isinstance(error.failures["1:interp-error"], ExperimentError)


def test_concurrent_sweeps_stay_quiet_and_deterministic(monkeypatch):
    monkeypatch.setenv("RBFSTOKES_INTERPOLATION_CONDITION_THRESHOLD", "10")
    document = {"n_d": [8, 12], "epsilon_range": [1.0, 8.0], "epsilon_count": 6, "n_s": 50}
    sequential = registry.create("eps-sweep").run_document(document)
    with warnings.catch_warnings():
        warnings.simplefilter("error", IllConditionedWarning)
        results = ExperimentOrchestrator().run([("eps-sweep", document)] * 3)
    for result in results:
        np.testing.assert_array_equal(result.table["value_error"], sequential.table["value_error"])
        assert result.summary == sequential.summary
