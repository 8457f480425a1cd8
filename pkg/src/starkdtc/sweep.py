"""Parameter-grid sweeps over the Floquet model.

A sweep evaluates one observable on a 1- or 2-axis grid around a base
parameter set.  Points sharing (L, Omega, epsilon, V, kernel, T1) reuse the
H1 eigensystem and stage-1 propagator; only the diagonal stage is rebuilt
per Stark strength, which is the dominant cost saver when F varies along an
axis.  Evaluation is deterministic: results are gathered by grid index, so
worker count and completion order never change the output, and each
completed point is journaled to disk for resumability.
"""

from __future__ import annotations

import hashlib
import json
import threading
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product
from pathlib import Path
from typing import Optional

import numpy as np

from .exceptions import ConfigError, NumericError
from .floquet import (
    FloquetPropagator,
    u1_from_eigensystem,
    overlaps,
    propagator_u2,
    unitarity_deviation,
)
from .hamiltonian import KERNEL_VARIANTS, SimulationParams, build_h1, build_h2_diagonal
from .hilbert import z_product_state
from .observables import (
    AutocorrelatorSeries,
    autocorrelator_series,
    fourier_spectrum,
    lifetime,
)
from .output import params_metadata, write_csv, write_sidecar

AXIS_NAMES = ("epsilon", "F_T2", "V", "L", "kernel", "initial_state")
OBSERVABLES = ("a_pi", "lifetime", "series", "spectrum", "overlap_table")

# canonical column layout per observable keeps CSV bytes stable across
# fresh and journal-resumed runs
_VALUE_COLUMNS = {
    "a_pi": ((), ("a_pi",)),
    "lifetime": ((), ("n_c", "first_reversal", "reversal_depth", "n_max")),
    "series": (("n", "c"), ()),
    "spectrum": (("omega", "magnitude"), ("a_pi",)),
    "overlap_table": (("quasi_energy", "overlap"), ()),
}
DEFAULT_GRID_CAP = 10_000
ALL_ONES = "all_ones"

JOURNAL_KIND = "starkdtc-sweep-journal"

# rough cap on cached eigensystems (~1.5 GB of stage-1 data)
_CACHE_BYTE_BUDGET = 1_500_000_000


@dataclass(frozen=True)
class SweepAxis:
    name: str
    values: tuple

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"unknown axis {self.name!r}, expected one of {AXIS_NAMES}")
        if len(self.values) == 0:
            raise ValueError(f"axis {self.name!r} has no values")
        object.__setattr__(self, "values", tuple(self.values))


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple
    base: SimulationParams
    observable: str
    n_cycles: int = 100
    n_max: int = 5000
    initial_state: str = ALL_ONES
    grid_cap: int = DEFAULT_GRID_CAP

    def __post_init__(self):
        axes = tuple(self.axes)
        if not 1 <= len(axes) <= 2:
            raise ValueError(f"sweeps take 1 or 2 axes, got {len(axes)}")
        names = [axis.name for axis in axes]
        if len(set(names)) != len(names):
            raise ValueError(f"axis names must be distinct, got {names}")
        if self.observable not in OBSERVABLES:
            raise ValueError(f"unknown observable {self.observable!r}, expected one of {OBSERVABLES}")
        size = self.grid_size()
        if size > self.grid_cap:
            raise ValueError(f"grid of {size} points exceeds the cap of {self.grid_cap}")
        object.__setattr__(self, "axes", axes)

    def grid_size(self) -> int:
        size = 1
        for axis in self.axes:
            size *= len(axis.values)
        return size

    def grid_points(self):
        """(index, coords) pairs in row-major axis order."""
        names = [axis.name for axis in self.axes]
        for index, combo in enumerate(product(*(axis.values for axis in self.axes))):
            yield index, dict(zip(names, combo))

    def point_inputs(self, coords: dict):
        """Resolve a grid point to (params, initial-state bit string)."""
        params = self.base
        for name, value in coords.items():
            if name == "epsilon":
                params = replace(params, epsilon=float(value))
            elif name == "V":
                params = replace(params, v=float(value))
            elif name == "L":
                params = replace(params, L=int(value))
            elif name == "kernel":
                params = replace(params, kernel=str(value))
        if "F_T2" in coords:
            params = params.with_f_t2(float(coords["F_T2"]))
        bits = coords.get("initial_state", self.initial_state)
        if bits == ALL_ONES:
            bits = "1" * params.L
        return params, bits

    def fingerprint(self) -> str:
        payload = {
            "axes": [[axis.name, list(axis.values)] for axis in self.axes],
            "base": params_metadata(self.base),
            "observable": self.observable,
            "n_cycles": self.n_cycles,
            "n_max": self.n_max,
            "initial_state": self.initial_state,
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


class PropagatorFactory:
    """Propagator construction with a byte-budgeted stage-1 cache.

    The H1 eigensystem and U1 are cached per (L, Omega, epsilon, V, kernel,
    T1); unitarity is validated once per cached U1 and the per-point row
    scaling by the diagonal stage preserves it exactly.
    """

    def __init__(self, byte_budget: int = _CACHE_BYTE_BUDGET):
        self._cache: OrderedDict = OrderedDict()
        self._lock = threading.Lock()
        self._byte_budget = byte_budget

    @staticmethod
    def _key(params: SimulationParams):
        return (params.L, params.omega, params.epsilon, params.v, params.kernel, params.t1)

    def _stage1(self, params: SimulationParams):
        key = self._key(params)
        with self._lock:
            if key in self._cache:
                self._cache.move_to_end(key)
                return self._cache[key]
        h1 = build_h1(params)
        eigs, vecs = np.linalg.eigh(h1)
        del h1
        u1 = u1_from_eigensystem(eigs, vecs, params.t1)
        dev = unitarity_deviation(u1)
        if dev > 1e-10:
            raise NumericError(f"cached stage-1 propagator deviates from unitarity by {dev:.2e}")
        entry = (eigs, vecs, u1)
        with self._lock:
            self._cache[key] = entry
            self._cache.move_to_end(key)
            self._evict()
        return entry

    def _evict(self):
        def entry_bytes(item):
            eigs, vecs, u1 = item
            return eigs.nbytes + vecs.nbytes + u1.nbytes

        while len(self._cache) > 1 and sum(entry_bytes(v) for v in self._cache.values()) > self._byte_budget:
            self._cache.popitem(last=False)

    def get(self, params: SimulationParams) -> FloquetPropagator:
        eigs, vecs, u1 = self._stage1(params)
        h2 = build_h2_diagonal(params)
        phase2 = propagator_u2(h2, params.t2)
        return FloquetPropagator(
            phase2[:, None] * u1,
            params=params,
            h1_eigenvalues=eigs,
            h1_eigenvectors=vecs,
            h2_diagonal=h2,
            phase2=phase2,
            validate=False,
        )


@dataclass
class SweepResult:
    """Grid coordinates plus one value record (or error marker) per point."""

    spec: SweepSpec
    coords: list
    values: list
    errors: list
    metadata: dict = field(default_factory=dict)

    def axis_names(self):
        return [axis.name for axis in self.spec.axes]

    def rows(self):
        """Long-format rows: axes, value columns (arrays expanded), error."""
        names = self.axis_names()
        array_keys, scalar_keys = _VALUE_COLUMNS[self.spec.observable]
        array_keys, scalar_keys = list(array_keys), list(scalar_keys)
        header = names + array_keys + scalar_keys + ["error"]
        rows = []
        for point, record, error in zip(self.coords, self.values, self.errors):
            base = [point[name] for name in names]
            if record is None:
                rows.append(base + [None] * (len(array_keys) + len(scalar_keys)) + [error])
                continue
            scalars = [record.get(key) for key in scalar_keys]
            if array_keys:
                length = len(record[array_keys[0]])
                for i in range(length):
                    rows.append(base + [record[key][i] for key in array_keys] + scalars + [None])
            else:
                rows.append(base + scalars + [None])
        return header, rows

    def to_csv(self, path, metadata: Optional[dict] = None) -> Path:
        header, rows = self.rows()
        out = write_csv(path, header, rows)
        sidecar = {
            "observable": self.spec.observable,
            "axes": [[axis.name, list(axis.values)] for axis in self.spec.axes],
            "base_params": params_metadata(self.spec.base),
            "n_cycles": self.spec.n_cycles,
            "n_max": self.spec.n_max,
            "initial_state": self.spec.initial_state,
            "fingerprint": self.spec.fingerprint(),
        }
        sidecar.update(self.metadata)
        if metadata:
            sidecar.update(metadata)
        write_sidecar(out, sidecar)
        return out


def _evaluate_point(spec: SweepSpec, coords: dict, factory: PropagatorFactory) -> dict:
    params, bits = spec.point_inputs(coords)
    if len(bits) != params.L or any(ch not in "01" for ch in bits):
        raise ValueError(f"initial state {bits!r} incompatible with L={params.L}")
    prop = factory.get(params)
    psi0 = z_product_state(bits, params.basis)
    observable = spec.observable
    if observable == "a_pi":
        series = autocorrelator_series(prop, psi0, spec.n_cycles)
        return {"a_pi": fourier_spectrum(series).a_pi}
    if observable == "series":
        series = autocorrelator_series(prop, psi0, spec.n_cycles)
        return {"n": list(range(spec.n_cycles + 1)), "c": series.values.tolist()}
    if observable == "spectrum":
        series = autocorrelator_series(prop, psi0, spec.n_cycles)
        spectral = fourier_spectrum(series)
        return {
            "omega": spectral.frequencies.tolist(),
            "magnitude": spectral.magnitudes.tolist(),
            "a_pi": spectral.a_pi,
        }
    if observable == "lifetime":
        return lifetime(prop, psi0, spec.n_max).record()
    if observable == "overlap_table":
        table = overlaps(prop.spectrum(), psi0)
        return {
            "quasi_energy": table.quasi_energies.tolist(),
            "overlap": table.overlaps.tolist(),
        }
    raise ValueError(f"unknown observable {observable!r}")


class _Journal:
    def __init__(self, path, fingerprint: str, resume: bool):
        self.path = Path(path)
        self._lock = threading.Lock()
        self.completed = {}
        if resume and self.path.exists():
            self._load(fingerprint)
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            header = {"kind": JOURNAL_KIND, "fingerprint": fingerprint}
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(json.dumps(header, sort_keys=True) + "\n")

    def _load(self, fingerprint: str):
        with open(self.path, encoding="utf-8") as fh:
            lines = [line for line in fh.read().splitlines() if line.strip()]
        if not lines:
            raise ConfigError(f"journal {self.path} is empty")
        header = json.loads(lines[0])
        if header.get("kind") != JOURNAL_KIND:
            raise ConfigError(f"{self.path} is not a sweep journal")
        if header.get("fingerprint") != fingerprint:
            raise ConfigError(f"journal {self.path} belongs to a different sweep spec")
        for line in lines[1:]:
            entry = json.loads(line)
            self.completed[entry["index"]] = entry

    def record(self, index: int, coords: dict, value, error):
        entry = {"index": index, "coords": coords}
        if error is None:
            entry["value"] = value
        else:
            entry["error"] = error
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")


def run_sweep(
    spec: SweepSpec,
    workers: int = 1,
    journal_path=None,
    resume: bool = False,
    factory: Optional[PropagatorFactory] = None,
) -> SweepResult:
    """Evaluate the observable at every grid point.

    Per-point numeric failures are recorded in place as error markers; the
    whole sweep fails only on an invalid spec.  With `journal_path` set every
    completed point is appended to a JSON-lines journal, and `resume=True`
    skips points already present in a journal for the identical spec.
    """
    if workers < 1:
        raise ValueError(f"worker count must be >= 1, got {workers}")
    factory = factory or PropagatorFactory()
    points = list(spec.grid_points())
    journal = _Journal(journal_path, spec.fingerprint(), resume) if journal_path else None

    values = [None] * len(points)
    errors = [None] * len(points)
    pending = []
    for index, coords in points:
        done = journal.completed.get(index) if journal else None
        if done is not None:
            values[index] = done.get("value")
            errors[index] = done.get("error")
        else:
            pending.append((index, coords))

    def work(item):
        index, coords = item
        try:
            return index, coords, _evaluate_point(spec, coords, factory), None
        except Exception as exc:  # per-point failures stay local to the point
            return index, coords, None, f"{type(exc).__name__}: {exc}"

    if workers == 1:
        outcomes = map(work, pending)
    else:
        pool = ThreadPoolExecutor(max_workers=workers)
        outcomes = pool.map(work, pending)
    for index, coords, value, error in outcomes:
        values[index] = value
        errors[index] = error
        if journal:
            journal.record(index, coords, value, error)
    if workers > 1:
        pool.shutdown()

    return SweepResult(
        spec=spec,
        coords=[coords for _, coords in points],
        values=values,
        errors=errors,
    )


def kernel_comparison(
    base: SimulationParams,
    f_grid,
    n_cycles: int = 100,
    workers: int = 1,
    factory: Optional[PropagatorFactory] = None,
) -> SweepResult:
    """A_pi versus Stark strength for all four interaction kernels."""
    if base.L > 12:
        raise ValueError(f"kernel comparison supports L <= 12, got {base.L}")
    spec = SweepSpec(
        axes=(SweepAxis("kernel", KERNEL_VARIANTS), SweepAxis("F_T2", tuple(f_grid))),
        base=base,
        observable="a_pi",
        n_cycles=n_cycles,
    )
    return run_sweep(spec, workers=workers, factory=factory)


@dataclass
class InitialStateComparison:
    series: SweepResult
    spectra: SweepResult


def initial_state_comparison(
    base: SimulationParams,
    states,
    f_values,
    n_cycles: int = 100,
    workers: int = 1,
    factory: Optional[PropagatorFactory] = None,
) -> InitialStateComparison:
    """C(nT) series and spectra for each (initial state, Stark strength) pair."""
    states = tuple(states)
    for bits in states:
        if len(bits) != base.L or any(ch not in "01" for ch in bits):
            raise ValueError(f"initial state {bits!r} incompatible with L={base.L}")
    spec = SweepSpec(
        axes=(SweepAxis("initial_state", states), SweepAxis("F_T2", tuple(f_values))),
        base=base,
        observable="series",
        n_cycles=n_cycles,
    )
    series_result = run_sweep(spec, workers=workers, factory=factory)

    spectra_values = []
    for record, coords in zip(series_result.values, series_result.coords):
        if record is None:
            spectra_values.append(None)
            continue
        series = AutocorrelatorSeries(
            values=np.asarray(record["c"]),
            n_cycles=n_cycles,
            params=None,
            initial_state=str(coords.get("initial_state", "")),
        )
        spectral = fourier_spectrum(series)
        spectra_values.append(
            {
                "omega": spectral.frequencies.tolist(),
                "magnitude": spectral.magnitudes.tolist(),
                "a_pi": spectral.a_pi,
            }
        )
    spectra_spec = SweepSpec(
        axes=spec.axes,
        base=base,
        observable="spectrum",
        n_cycles=n_cycles,
    )
    spectra_result = SweepResult(
        spec=spectra_spec,
        coords=list(series_result.coords),
        values=spectra_values,
        errors=list(series_result.errors),
    )
    return InitialStateComparison(series=series_result, spectra=spectra_result)
