"""Experiment configuration files (JSON or TOML) and their validation."""

from __future__ import annotations

import hashlib
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import TYPE_CHECKING, Any, Literal, get_args

from zerolab._exceptions import ConfigError
from zerolab.currents import MAX_NODES, QuadratureGrid
from zerolab.zeros import DEFAULT_LEVELS, DomainSpec

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

if TYPE_CHECKING:
    from collections.abc import Mapping

    from typing_extensions import TypeAlias

__all__ = ["ExperimentConfig", "ExperimentKind", "RunConfig", "load_config"]

ExperimentKind: TypeAlias = Literal[
    "zero-count", "hole", "max-modulus", "l1-log", "kernel-suite", "pl-check"
]
KINDS: tuple[str, ...] = get_args(ExperimentKind)
MIN_TRIALS = 100
_ROOT_KINDS = ("hole", "max-modulus", "l1-log", "pl-check")
_RUN_KEYS = ("experiments", "master_seed", "output_dir", "threads", "record_timing")
# the ball-shell rule of m = 2 counts is four-dimensional
BALL_QUADRATURE = QuadratureGrid(radial_cells=4, angular_points=32)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment of a run.

    Parameters
    ----------
    kind : str
        One of ``zero-count``, ``hole``, ``max-modulus``, ``l1-log``,
        ``kernel-suite`` or ``pl-check``.
    m : int
        Complex dimension, by default 1.
    degrees : tuple[int, ...]
        The N-grid, by default ``(10,)``.
    trials : int
        Monte Carlo trials per degree (at least 100), by default 1000.
    domain : DomainSpec
        Region U, by default the unit disk.
    deltas : tuple[float, ...]
        Deviation thresholds, by default ``(0.15,)``.
    confidence : float
        Level of the Wilson intervals, by default 0.95.
    refine_levels : int
        Local refinement rounds of the max-modulus search, by default 3.
    width : float
        Smoothing width of the Poincaré–Lelong test functions, by default 0.1.
    lattice_t, lattice_a : float
        Coherent-state lattice parameters of the kernel suite.
    witness_samples : int
        Conditioned samples for the hole lower-bound witness, by default 0.
    batch_size : int
        Trials sampled and solved together, by default 256.
    quadrature : QuadratureGrid
        Grid for the quadrature-based statistics.
    name : str, optional
        Stem of the output files, by default ``"{index}-{kind}"``.
    """

    kind: ExperimentKind
    m: int = 1
    degrees: tuple[int, ...] = (10,)
    trials: int = 1000
    domain: DomainSpec = field(default_factory=lambda: DomainSpec.disk(1.0))
    deltas: tuple[float, ...] = (0.15,)
    confidence: float = 0.95
    refine_levels: int = DEFAULT_LEVELS
    width: float = 0.1
    lattice_t: float = 0.5
    lattice_a: float = 3.0
    witness_samples: int = 0
    batch_size: int = 256
    quadrature: QuadratureGrid = field(default_factory=QuadratureGrid)
    name: str | None = None

    def validate(self, path: str = "") -> None:
        """Raise `ConfigError` naming the first offending field."""
        at = f"{path}." if path else ""
        if self.kind not in KINDS:
            raise ConfigError(f"{at}kind", f"unknown experiment {self.kind!r}")
        if self.m not in (1, 2):
            raise ConfigError(f"{at}m", f"m must be 1 or 2, got {self.m}")
        if self.m != 1 and self.kind in _ROOT_KINDS:
            raise ConfigError(f"{at}m", f"{self.kind} needs m = 1, got {self.m}")
        if not self.degrees or any(n < 1 for n in self.degrees):
            raise ConfigError(f"{at}degrees", "need at least one degree, all >= 1")
        if self.trials < MIN_TRIALS:
            raise ConfigError(
                f"{at}trials", f"trials must be >= {MIN_TRIALS}, got {self.trials}"
            )
        if any(not d > 0 for d in self.deltas):
            raise ConfigError(f"{at}deltas", "deltas must be positive")
        if not 0 < self.confidence < 1:
            raise ConfigError(f"{at}confidence", "confidence must lie in (0, 1)")
        if self.refine_levels < 1:
            raise ConfigError(f"{at}refine_levels", "refine_levels must be >= 1")
        if self.batch_size < 1:
            raise ConfigError(f"{at}batch_size", "batch_size must be >= 1")
        if not self.width > 0:
            raise ConfigError(f"{at}width", "width must be positive")
        if self.witness_samples < 0:
            raise ConfigError(f"{at}witness_samples", "must be >= 0")
        if self.domain.m != self.m:
            raise ConfigError(
                f"{at}domain",
                f"domain lives in CP^{self.domain.m}, expected m={self.m}",
            )
        if self.kind == "kernel-suite":
            self._validate_lattice(at)
        if self.m == 2 and self.kind == "zero-count" and (
            self.domain.kind != "euclidean_disk" or self.domain.center.norm_squared()
        ):
            raise ConfigError(f"{at}domain", "m = 2 counts need a centred ball")
        if self.m == 2 and self.kind == "zero-count":
            q = self.quadrature
            nodes = (q.radial_cells * q.nodes_per_cell * q.angular_points) ** 2
            if nodes > MAX_NODES:
                raise ConfigError(
                    f"{at}quadrature",
                    f"{nodes} nodes per ball shell exceed the limit of {MAX_NODES}; "
                    "lower radial_cells or angular_points",
                )

    def _validate_lattice(self, at: str) -> None:
        if not 0 < self.lattice_t <= 0.5:
            raise ConfigError(f"{at}lattice_t", "lattice_t must lie in (0, 0.5]")
        if not self.lattice_a > 0:
            raise ConfigError(f"{at}lattice_a", "lattice_a must be positive")
        small = [
            n for n in self.degrees if self.lattice_t * math.sqrt(n) < self.lattice_a
        ]
        if small:
            raise ConfigError(
                f"{at}degrees",
                f"lattice needs lattice_t * sqrt(N) >= lattice_a, fails for {small}",
            )

    @property
    def stem(self) -> str:
        return self.name or self.kind

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["degrees"] = list(self.degrees)
        out["deltas"] = list(self.deltas)
        out["domain"] = self.domain.to_dict()
        out["quadrature"] = self.quadrature.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], path: str = "") -> ExperimentConfig:
        at = f"{path}." if path else ""
        if not isinstance(data, dict):
            raise ConfigError(path, f"expected a table, got {type(data).__name__}")
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(f"{at}{key}", "unknown key")
        if "kind" not in data:
            raise ConfigError(f"{at}kind", "missing required key")
        kwargs: dict[str, Any] = {"kind": _typed(data["kind"], str, f"{at}kind")}
        for key in ("m", "trials", "refine_levels", "witness_samples", "batch_size"):
            if key in data:
                kwargs[key] = _typed(data[key], int, f"{at}{key}")
        for key in ("confidence", "width", "lattice_t", "lattice_a"):
            if key in data:
                kwargs[key] = float(_typed(data[key], (int, float), f"{at}{key}"))
        if "name" in data:
            kwargs["name"] = _typed(data["name"], str, f"{at}name")
        if "degrees" in data:
            kwargs["degrees"] = _sequence(data["degrees"], int, f"{at}degrees")
        if "deltas" in data:
            kwargs["deltas"] = tuple(
                float(d) for d in _sequence(data["deltas"], (int, float), f"{at}deltas")
            )
        if "domain" in data:
            kwargs["domain"] = _domain(data["domain"], f"{at}domain")
        elif kwargs.get("m", 1) == 2:
            kwargs["domain"] = DomainSpec.ball(1.0)
        if "quadrature" in data:
            kwargs["quadrature"] = _quadrature(data["quadrature"], f"{at}quadrature")
        elif kwargs.get("m", 1) == 2:
            kwargs["quadrature"] = BALL_QUADRATURE
        cfg = cls(**kwargs)
        cfg.validate(path)
        return cfg


@dataclass(frozen=True)
class RunConfig:
    """A list of experiments sharing one master seed.

    Parameters
    ----------
    experiments : tuple[ExperimentConfig, ...]
        Experiments to run, in order.
    master_seed : int
        Philox key for every trial of every experiment, by default 0.
    output_dir : Path
        Directory for records, summaries and the manifest, by default
        ``results``.
    threads : int, optional
        Worker threads; `None` defers to ``ZEROLAB_NUM_THREADS``.
    record_timing : bool
        Store per-trial wall time in the JSONL records, by default True.
    """

    experiments: tuple[ExperimentConfig, ...] = ()
    master_seed: int = 0
    output_dir: Path = Path("results")
    threads: int | None = None
    record_timing: bool = True

    def with_overrides(
        self,
        master_seed: int | None = None,
        threads: int | None = None,
        output_dir: str | Path | None = None,
    ) -> RunConfig:
        """Return a copy with command-line overrides applied."""
        out = self
        if master_seed is not None:
            out = replace(out, master_seed=master_seed)
        if threads is not None:
            out = replace(out, threads=threads)
        if output_dir is not None:
            out = replace(out, output_dir=Path(output_dir))
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "master_seed": self.master_seed,
            "output_dir": str(self.output_dir),
            "record_timing": self.record_timing,
            "experiments": [e.to_dict() for e in self.experiments],
        }

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON form (thread count excluded)."""
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> RunConfig:
        if not isinstance(data, dict):
            raise ConfigError("", "configuration root must be a table")
        for key in data:
            if key not in _RUN_KEYS:
                raise ConfigError(key, "unknown key")
        raw = data.get("experiments", [])
        if not isinstance(raw, list):
            raise ConfigError("experiments", "expected a list of tables")
        experiments = tuple(
            ExperimentConfig.from_dict(item, f"experiments[{i}]")
            for i, item in enumerate(raw)
        )
        seed = _typed(data.get("master_seed", 0), int, "master_seed")
        if not 0 <= seed < 2**64:
            raise ConfigError("master_seed", f"must lie in [0, 2**64), got {seed}")
        threads = data.get("threads")
        if threads is not None and _typed(threads, int, "threads") < 1:
            raise ConfigError("threads", f"must be >= 1, got {threads}")
        output_dir = _typed(data.get("output_dir", "results"), str, "output_dir")
        timing = _typed(data.get("record_timing", True), bool, "record_timing")
        return cls(experiments, seed, Path(output_dir), threads, timing)

    @classmethod
    def from_file(cls, path: str | Path) -> RunConfig:
        return load_config(path)


def load_config(path: str | Path) -> RunConfig:
    """Read a ``.json`` or ``.toml`` run configuration.

    Raises
    ------
    ConfigError
        If the file cannot be parsed or fails validation.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError("", f"cannot read {path}: {e}") from e
    try:
        if path.suffix == ".toml":
            data = tomllib.loads(text)
        elif path.suffix == ".json":
            data = json.loads(text)
        else:
            raise ConfigError("", f"unsupported config format {path.suffix!r}")
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
        raise ConfigError("", f"cannot parse {path}: {e}") from e
    return RunConfig.from_dict(data)


def _typed(value: Any, types: type | tuple[type, ...], path: str) -> Any:
    # bool is an int subclass; only accept it where bool is asked for
    if isinstance(value, bool) and types is not bool:
        raise ConfigError(path, f"expected {_names(types)}, got bool")
    if not isinstance(value, types):
        raise ConfigError(path, f"expected {_names(types)}, got {type(value).__name__}")
    return value


def _names(types: type | tuple[type, ...]) -> str:
    if isinstance(types, tuple):
        return " or ".join(t.__name__ for t in types)
    return types.__name__


def _sequence(value: Any, types: type | tuple[type, ...], path: str) -> tuple:
    if not isinstance(value, list):
        raise ConfigError(path, f"expected a list, got {type(value).__name__}")
    return tuple(_typed(v, types, f"{path}[{i}]") for i, v in enumerate(value))


def _domain(value: Any, path: str) -> DomainSpec:
    if not isinstance(value, dict):
        raise ConfigError(path, "expected a table")
    try:
        return DomainSpec.from_dict(value)
    except KeyError as e:
        raise ConfigError(f"{path}.{e.args[0]}", "missing required key") from e
    except (TypeError, ValueError) as e:
        raise ConfigError(path, str(e)) from e


def _quadrature(value: Any, path: str) -> QuadratureGrid:
    if not isinstance(value, dict):
        raise ConfigError(path, "expected a table")
    known = {f.name for f in fields(QuadratureGrid)}
    for key in value:
        if key not in known:
            raise ConfigError(f"{path}.{key}", "unknown key")
    try:
        return QuadratureGrid.from_dict(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(path, str(e)) from e
