"""
Parameter sweeps over the isotropic family.

SweepRunner evaluates the grid on a thread pool and mirrors the progress
interface of a long running job: ``progress`` (0-100), ``status``,
``is_running`` and ``cancel()``, with an optional ``callback(progress,
status)`` invoked after every finished grid point.
"""

import json
import logging
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import psutil

from .detect import (
    ENTANGLED,
    INCONCLUSIVE,
    entanglement_threshold,
    f_bar,
    f_hat,
    f_hat_isotropic_closed_form,
    isotropic_state,
    v_hat,
)
from .errors import ConfigError, SkewForgeError
from .matrix_io import write_csv
from .measures import q_uncertainty_spectral, total_variance, von_neumann_entropy
from .safety import VERDICT_BAND
from .specfun import MonotoneFunctionSpec, parse_spec

logger = logging.getLogger(__name__)

FAMILIES = ("isotropic",)

# Outputs computed once per grid point; the rest get one column per spec.
STATE_OUTPUTS = ("v_hat", "entropy", "total_variance")
SPEC_OUTPUTS = ("f_hat", "f_hat_closed", "f_bar", "q_a", "q_b")
OUTPUTS = SPEC_OUTPUTS + STATE_OUTPUTS


def default_workers():
    """Physical core count, 1 when psutil cannot tell."""
    return psutil.cpu_count(logical=False) or 1


@dataclass(frozen=True)
class SweepConfig:
    family: str
    dim: int
    param_grid: Tuple[float, float, float]
    specs: Tuple[MonotoneFunctionSpec, ...]
    outputs: Tuple[str, ...]
    workers: Optional[int] = None

    @classmethod
    def from_dict(cls, document):
        if not isinstance(document, dict):
            raise ConfigError("sweep configuration must be a JSON object")
        unknown = set(document) - {"family", "dim", "param_grid", "specs", "outputs", "workers"}
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        try:
            family = document["family"]
            dim = document["dim"]
            grid = document["param_grid"]
            specs = document["specs"]
            outputs = document["outputs"]
        except KeyError as e:
            raise ConfigError(f"configuration is missing {e.args[0]!r}") from None

        if family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}, got {family!r}")
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 2:
            raise ConfigError(f"dim must be an integer >= 2, got {dim!r}")
        if (not isinstance(grid, list) or len(grid) != 3
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in grid)):
            raise ConfigError(f"param_grid must be [start, stop, step], got {grid!r}")
        start, stop, step = (float(v) for v in grid)
        if step <= 0:
            raise ConfigError(f"step must be positive, got {step}")
        if start > stop:
            raise ConfigError(f"start {start} exceeds stop {stop}")
        if start < 0 or stop > 1:
            raise ConfigError(f"isotropic parameters lie in [0, 1], got [{start}, {stop}]")
        if not isinstance(specs, list) or not specs:
            raise ConfigError("specs must be a non-empty list of function identifiers")
        try:
            parsed = tuple(parse_spec(s) for s in specs)
        except SkewForgeError as e:
            raise ConfigError(str(e)) from None
        if len({s.identifier for s in parsed}) != len(parsed):
            raise ConfigError("specs contain duplicates")
        if not isinstance(outputs, list) or not outputs:
            raise ConfigError("outputs must be a non-empty list")
        bad = [o for o in outputs if o not in OUTPUTS]
        if bad:
            raise ConfigError(f"unknown outputs {bad}, expected a subset of {OUTPUTS}")
        if len(set(outputs)) != len(outputs):
            raise ConfigError("outputs contain duplicates")
        workers = document.get("workers")
        if workers is not None and (not isinstance(workers, int) or isinstance(workers, bool) or workers < 1):
            raise ConfigError(f"workers must be a positive integer or null, got {workers!r}")
        return cls(family, dim, (start, stop, step), parsed, tuple(outputs), workers)

    @classmethod
    def from_file(cls, path):
        try:
            document = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as e:
            raise ConfigError(f"cannot read {path}: {e.strerror}") from None
        except json.JSONDecodeError as e:
            raise ConfigError(f"invalid JSON in {path}: {e}") from None
        return cls.from_dict(document)

    def grid(self):
        """Grid points start, start + step, ... up to and including stop."""
        start, stop, step = self.param_grid
        count = int((stop - start) / step + 1e-9)
        return [round(start + k * step, 12) for k in range(count + 1)]

    def columns(self):
        columns = []
        for output in self.outputs:
            if output in STATE_OUTPUTS:
                columns.append(output)
            else:
                columns.extend(f"{output}:{spec.identifier}" for spec in self.specs)
        return columns

    def header(self):
        return ["param"] + self.columns() + ["verdict"]


@dataclass(frozen=True)
class ResultRow:
    param: float
    values: Dict[str, float] = field(default_factory=dict)
    verdict: str = INCONCLUSIVE

    def cells(self, columns):
        return [self.param] + [self.values[c] for c in columns] + [self.verdict]


def evaluate_point(config, p):
    """One ResultRow of the isotropic family at parameter p."""
    d = config.dim
    state = isotropic_state(p, d)
    threshold = entanglement_threshold(d)
    spread = v_hat(state)
    values = {}
    fired = spread < threshold - VERDICT_BAND

    for spec in config.specs:
        skew = f_hat(spec, state)
        fired = fired or skew > threshold + VERDICT_BAND
        for output in config.outputs:
            column = f"{output}:{spec.identifier}"
            if output == "f_hat":
                values[column] = skew
            elif output == "f_hat_closed":
                values[column] = f_hat_isotropic_closed_form(spec, p, d)
            elif output == "f_bar":
                values[column] = f_bar(spec, state)
            elif output == "q_a":
                values[column] = q_uncertainty_spectral(spec, state.reduced('a'))
            elif output == "q_b":
                values[column] = q_uncertainty_spectral(spec, state.reduced('b'))

    if "v_hat" in config.outputs:
        values["v_hat"] = spread
    if "entropy" in config.outputs:
        values["entropy"] = von_neumann_entropy(state.state)
    if "total_variance" in config.outputs:
        values["total_variance"] = total_variance(state.state)
    return ResultRow(p, values, ENTANGLED if fired else INCONCLUSIVE)


class SweepRunner:
    """Evaluates a SweepConfig grid, blocking via run() or in the background via start()."""

    def __init__(self, config, workers=None):
        self.config = config
        self.workers = workers or config.workers or default_workers()
        self._progress = 0
        self._status = "Idle"
        self._running = False
        self._cancelled = False
        self._thread = None
        self._rows: List[ResultRow] = []
        self._error: Optional[BaseException] = None

    @property
    def status(self):
        return self._status

    @property
    def progress(self):
        """Percentage of grid points finished (0-100)."""
        return self._progress

    @property
    def is_running(self):
        return self._running

    @property
    def cancelled(self):
        return self._cancelled

    @property
    def error(self):
        """Exception that ended a background run, if any."""
        return self._error

    @property
    def rows(self):
        """Finished rows ordered by parameter."""
        return sorted(self._rows, key=lambda row: row.param)

    def cancel(self):
        """Stop after the grid points already in flight; False if nothing is running."""
        if self._cancelled or not self._running:
            return False
        self._running = False
        self._cancelled = True
        self._status = "Cancelled by user"
        return True

    def _update_progress(self, progress, status, callback=None):
        self._progress = progress
        self._status = status
        if callback:
            callback(progress, status)

    def run(self, callback=None):
        """Evaluate the whole grid; returns the rows ordered by parameter."""
        self._running = True
        self._cancelled = False
        self._rows = []
        try:
            self._run(callback)
        finally:
            self._running = False
        return self.rows

    def start(self, callback=None):
        """Run in a daemon thread; poll ``is_running`` and read ``rows`` afterwards."""
        if self._running:
            return False
        self._running = True
        self._error = None
        self._thread = threading.Thread(target=self._run_thread, args=(callback,), daemon=True)
        self._thread.start()
        return True

    def join(self, timeout=None):
        if self._thread is not None:
            self._thread.join(timeout)

    def _run_thread(self, callback):
        try:
            self.run(callback)
        except Exception as e:
            self._error = e
            self._update_progress(self._progress, f"Error: {e}", callback)

    def _run(self, callback):
        points = self.config.grid()
        total = len(points)
        logger.debug("sweeping %d points of the d=%d %s family on %d workers",
                     total, self.config.dim, self.config.family, self.workers)
        self._update_progress(0, f"Sweeping {total} points", callback)

        executor = ThreadPoolExecutor(max_workers=self.workers)
        try:
            futures = {executor.submit(evaluate_point, self.config, p): p for p in points}
            for future in as_completed(futures):
                if self._cancelled:
                    break
                self._rows.append(future.result())
                done = len(self._rows)
                self._update_progress(100 * done // total, f"p = {futures[future]:g} ({done}/{total})", callback)
        finally:
            executor.shutdown(wait=True, cancel_futures=True)

        # nothing is left to cancel once the final status goes out
        self._running = False
        if self._cancelled:
            self._update_progress(self._progress, "Sweep cancelled", callback)
        else:
            self._update_progress(100, "Sweep finished", callback)


def write_rows(path, config, rows):
    """CSV with header param, <output>[:<spec>] ..., verdict."""
    columns = config.columns()
    write_csv(path, config.header(), [row.cells(columns) for row in rows])
