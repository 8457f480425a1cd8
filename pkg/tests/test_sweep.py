
import numpy as np
import pytest

from starkdtc import (
    ConfigError,
    PropagatorFactory,
    SimulationParams,
    SweepAxis,
    SweepSpec,
    autocorrelator_series,
    floquet_operator,
    fourier_spectrum,
    initial_state_comparison,
    kernel_comparison,
    run_sweep,
    z_product_state,
)

BASE = SimulationParams(L=4, omega=np.pi / 2, epsilon=0.2, v=0.1, t1=1.0, t2=10.0)


def small_spec(observable="a_pi", **kwargs):
    defaults = dict(
        axes=(SweepAxis("epsilon", (0.0, 0.1, 0.2)), SweepAxis("F_T2", (0.0, 0.25))),
        base=BASE,
        observable=observable,
        n_cycles=20,
        n_max=50,
    )
    defaults.update(kwargs)
    return SweepSpec(**defaults)


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(axes=(), base=BASE, observable="a_pi")
    with pytest.raises(ValueError):
        SweepSpec(
            axes=(SweepAxis("epsilon", (0.0,)),) * 3, base=BASE, observable="a_pi"
        )
    with pytest.raises(ValueError):
        SweepSpec(
            axes=(SweepAxis("epsilon", (0.0,)), SweepAxis("epsilon", (0.1,))),
            base=BASE,
            observable="a_pi",
        )
    with pytest.raises(ValueError):
        small_spec(observable="entropy")
    with pytest.raises(ValueError):
        SweepAxis("temperature", (1.0,))
    with pytest.raises(ValueError):
        SweepAxis("epsilon", ())
    with pytest.raises(ValueError):
        small_spec(grid_cap=3)


def test_grid_enumeration_row_major():
    spec = small_spec()
    points = list(spec.grid_points())
    assert len(points) == 6
    assert points[0] == (0, {"epsilon": 0.0, "F_T2": 0.0})
    assert points[1] == (1, {"epsilon": 0.0, "F_T2": 0.25})
    assert points[5] == (5, {"epsilon": 0.2, "F_T2": 0.25})


def test_point_inputs_resolution():
    spec = small_spec()
    params, bits = spec.point_inputs({"epsilon": 0.1, "F_T2": 0.25})
    assert params.epsilon == 0.1
    assert params.f == pytest.approx(0.025)
    assert bits == "1111"
    spec2 = SweepSpec(
        axes=(SweepAxis("L", (2, 3)), SweepAxis("kernel", ("NN", "ALL"))),
        base=BASE,
        observable="a_pi",
    )
    params, bits = spec2.point_inputs({"L": 3, "kernel": "ALL"})
    assert params.L == 3 and params.kernel == "ALL"
    assert bits == "111"  # all-ones tracks the per-point L


def test_single_point_perfect_dtc():
    spec = SweepSpec(
        axes=(SweepAxis("epsilon", (0.0,)), SweepAxis("F_T2", (0.0,))),
        base=SimulationParams(L=3, omega=np.pi / 2, v=0.0),
        observable="a_pi",
        n_cycles=20,
    )
    result = run_sweep(spec)
    assert result.values[0]["a_pi"] == pytest.approx(1.0, abs=1e-10)
    assert result.errors == [None]


def test_sweep_matches_direct_evaluation():
    # the cached-eigensystem path must agree with fresh per-point builds
    spec = small_spec()
    result = run_sweep(spec)
    for coords, record in zip(result.coords, result.values):
        params, bits = spec.point_inputs(coords)
        prop = floquet_operator(params)
        series = autocorrelator_series(prop, z_product_state(bits, params.basis), spec.n_cycles)
        assert record["a_pi"] == pytest.approx(fourier_spectrum(series).a_pi, abs=1e-12)


def test_sweep_deterministic_across_worker_counts(tmp_path):
    spec = small_spec()
    results = [run_sweep(spec, workers=w) for w in (1, 2, 3)]
    paths = []
    for i, result in enumerate(results):
        paths.append(result.to_csv(tmp_path / f"sweep_{i}.csv"))
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]


def test_sweep_point_independence():
    # removing a grid point does not change any other point's value
    full = run_sweep(small_spec())
    reduced_spec = SweepSpec(
        axes=(SweepAxis("epsilon", (0.0, 0.2)), SweepAxis("F_T2", (0.0, 0.25))),
        base=BASE,
        observable="a_pi",
        n_cycles=20,
    )
    reduced = run_sweep(reduced_spec)
    kept = {(c["epsilon"], c["F_T2"]): v["a_pi"] for c, v in zip(full.coords, full.values)}
    for coords, record in zip(reduced.coords, reduced.values):
        assert record["a_pi"] == kept[(coords["epsilon"], coords["F_T2"])]


def test_sweep_journal_and_resume(tmp_path):
    spec = small_spec()
    journal = tmp_path / "journal.jsonl"
    reference = run_sweep(spec, journal_path=journal)
    ref_csv = reference.to_csv(tmp_path / "ref.csv").read_bytes()

    # truncate the journal to simulate an interrupted sweep, then resume
    lines = journal.read_text().splitlines()
    assert len(lines) == 1 + spec.grid_size()
    (tmp_path / "journal.jsonl").write_text("\n".join(lines[:4]) + "\n")
    resumed = run_sweep(spec, journal_path=journal, resume=True)
    resumed_csv = resumed.to_csv(tmp_path / "resumed.csv").read_bytes()
    assert resumed_csv == ref_csv

    lines_after = journal.read_text().splitlines()
    assert len(lines_after) == 1 + spec.grid_size()


def test_sweep_resume_rejects_mismatched_spec(tmp_path):
    journal = tmp_path / "journal.jsonl"
    run_sweep(small_spec(), journal_path=journal)
    other = small_spec(n_cycles=30)
    with pytest.raises(ConfigError):
        run_sweep(other, journal_path=journal, resume=True)


def test_sweep_error_markers_stay_local():
    # a state incompatible with the per-point L fails that point only
    spec = SweepSpec(
        axes=(SweepAxis("L", (3, 4)),),
        base=BASE,
        observable="a_pi",
        n_cycles=10,
        initial_state="1111",
    )
    result = run_sweep(spec)
    assert result.values[0] is None
    assert "initial state" in result.errors[0]
    assert result.values[1] is not None
    assert result.errors[1] is None
    header, rows = result.rows()
    assert header[-1] == "error"
    assert rows[0][-1] is not None


def test_lifetime_observable_record():
    spec = SweepSpec(
        axes=(SweepAxis("F_T2", (0.0,)),),
        base=SimulationParams(L=1, omega=np.pi / 2, epsilon=0.05),
        observable="lifetime",
        n_max=200,
    )
    result = run_sweep(spec)
    record = result.values[0]
    assert record["first_reversal"] == 16
    assert record["n_max"] == 200


def test_series_and_overlap_observables_roundtrip(tmp_path):
    for observable in ("series", "spectrum", "overlap_table"):
        spec = SweepSpec(
            axes=(SweepAxis("F_T2", (0.0, 0.25)),),
            base=SimulationParams(L=3, omega=np.pi / 2, epsilon=0.2, v=0.1),
            observable=observable,
            n_cycles=10,
        )
        result = run_sweep(spec, journal_path=tmp_path / f"{observable}.jsonl")
        fresh = result.to_csv(tmp_path / f"{observable}_fresh.csv").read_bytes()
        resumed = run_sweep(spec, journal_path=tmp_path / f"{observable}.jsonl", resume=True)
        again = resumed.to_csv(tmp_path / f"{observable}_resumed.csv").read_bytes()
        assert fresh == again


def test_propagator_factory_cache_reuse():
    factory = PropagatorFactory()
    p1 = BASE.with_f_t2(0.1)
    p2 = BASE.with_f_t2(0.3)
    prop1 = factory.get(p1)
    prop2 = factory.get(p2)
    # stage-1 data shared, diagonal stage rebuilt
    assert prop1.h1_eigenvectors is prop2.h1_eigenvectors
    assert not np.array_equal(prop1.phase2, prop2.phase2)
    direct = floquet_operator(p2)
    assert np.max(np.abs(prop2.u_f - direct.u_f)) < 1e-12


def test_kernel_comparison_coincides_at_zero_v():
    base = SimulationParams(L=4, omega=np.pi / 2, epsilon=0.2, v=0.0)
    result = kernel_comparison(base, (0.0, 0.2), n_cycles=20)
    by_kernel = {}
    for coords, record in zip(result.coords, result.values):
        by_kernel.setdefault(coords["F_T2"], []).append(record["a_pi"])
    for values in by_kernel.values():
        assert len(set(values)) == 1  # bitwise identical when interaction is off


def test_kernel_comparison_emits_kernel_column():
    base = SimulationParams(L=3, omega=np.pi / 2, epsilon=0.1, v=0.1)
    result = kernel_comparison(base, (0.0,), n_cycles=10)
    header, rows = result.rows()
    assert header[0] == "kernel"
    assert {row[0] for row in rows} == {"NN", "NNN", "NNNN", "ALL"}
    with pytest.raises(ValueError):
        kernel_comparison(SimulationParams(L=13), (0.0,))


def test_initial_state_comparison_single_site_symmetry():
    # sigma^x symmetry: |0> and |1> give identical a_pi for a single site
    base = SimulationParams(L=1, omega=np.pi / 2, epsilon=0.1)
    comparison = initial_state_comparison(base, ("0", "1"), (0.0,), n_cycles=20)
    api = [rec["a_pi"] for rec in comparison.spectra.values]
    assert api[0] == pytest.approx(api[1], abs=1e-12)


def test_initial_state_comparison_tables_keyed_by_state():
    base = SimulationParams(L=4, omega=np.pi / 2, epsilon=0.2, v=0.1)
    comparison = initial_state_comparison(base, ("1111", "1010"), (0.0, 0.4), n_cycles=10)
    assert len(comparison.series.values) == 4
    assert len(comparison.spectra.values) == 4
    labels = {c["initial_state"] for c in comparison.series.coords}
    assert labels == {"1111", "1010"}
    # spectra derive from the series without recomputation
    for series_rec, spectra_rec in zip(comparison.series.values, comparison.spectra.values):
        from starkdtc import AutocorrelatorSeries

        series = AutocorrelatorSeries(
            values=np.asarray(series_rec["c"]), n_cycles=10, params=None
        )
        assert fourier_spectrum(series).a_pi == pytest.approx(spectra_rec["a_pi"], abs=1e-15)
    with pytest.raises(ValueError):
        initial_state_comparison(base, ("111",), (0.0,))
