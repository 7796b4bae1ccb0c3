"""
Run documents: JSON files describing one model and the parameters of the
solve, split, sweep and wavefunction commands.

Documents are parsed with json; a PyYAML compose pass over the same
text records the line of every key, so errors name the dotted path and
that line.
"""

import copy
import json
import logging
from dataclasses import asdict, dataclass, replace
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
import yaml

from ..geometry import Curve, FlatPoint, HyperbolicPoint, circle, ellipse, polyline, segment
from ..models import Family, ModelSpec
from ..utils.errors import (ConfigError, DegeneracyError, GeometryError, ModelError,
                            OverlapError, SingularityError)
from ..utils.settings import get_default_settings

SWEEP_FAMILIES = ("Point1D", "Point2D", "Point3D")
SWEEP_VARIABLES = ("a", "lambda", "mu")
CURVE_SHAPES = ("circle", "ellipse", "segment", "polyline")

_MISSING = object()

logger = logging.getLogger(__name__)


# ------------------------------------------------------------------ sections


@dataclass(frozen=True)
class NumericsConfig:
    quad_order: int = 32
    tol: float = 1e-12
    window: Optional[Tuple[float, float]] = None
    brute_force_grid: int = 4000
    flow_points: int = 20


@dataclass(frozen=True)
class SolveConfig:
    flow: bool = True
    riesz_check: bool = False
    cross_check: bool = False


@dataclass(frozen=True)
class SplitConfig:
    oracle: Optional[bool] = None


@dataclass(frozen=True)
class SweepConfig:
    """
    Two identical point centers 2a apart, swept over one variable.

    Attributes:
        family: Point1D, Point2D or Point3D
        variable: "a", "lambda" (Point1D) or "mu" (Point2D, Point3D)
        start, stop, steps: linear sweep range, start < stop, steps ≥ 2
        lam: fixed coupling λ (Point1D)
        mu: fixed √|E_B| (Point2D, Point3D)
        a: fixed half separation
    """
    family: str
    variable: str
    start: float
    stop: float
    steps: int
    lam: Optional[float] = None
    mu: Optional[float] = None
    a: Optional[float] = None

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    def to_dict(self) -> dict:
        doc = {
            'family': self.family,
            'variable': self.variable,
            'start': self.start,
            'stop': self.stop,
            'steps': self.steps,
        }
        for key, value in (('lambda', self.lam), ('mu', self.mu), ('a', self.a)):
            if value is not None:
                doc[key] = value
        return doc


@dataclass(frozen=True)
class WavefunctionConfig:
    state: int
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    points: Tuple[int, ...]
    correction_center: Optional[int] = None

    @property
    def dimension(self) -> int:
        return len(self.lower)

    def to_dict(self) -> dict:
        doc = {
            'state': self.state,
            'grid': {'lower': list(self.lower), 'upper': list(self.upper), 'points': list(self.points)},
        }
        if self.correction_center is not None:
            doc['correction_center'] = self.correction_center
        return doc


@dataclass(frozen=True)
class OutputConfig:
    path: Optional[str] = None


@dataclass(frozen=True, eq=False)
class RunConfig:
    """
    A validated run document.

    Two RunConfigs are equal when their resolved documents are equal, so
    the echo written into every report parses back to an equal config.
    """
    model: Optional[ModelSpec]
    model_doc: Optional[Dict[str, Any]]
    numerics: NumericsConfig
    solve: SolveConfig
    split: SplitConfig
    sweep: Optional[SweepConfig]
    wavefunction: Optional[WavefunctionConfig]
    output: OutputConfig

    def require_model(self) -> ModelSpec:
        if self.model is None:
            raise ConfigError("this command needs a 'model' section", "model")
        return self.model

    def with_overrides(self, quad_order: Optional[int] = None, tol: Optional[float] = None,
                       out: Optional[str] = None) -> "RunConfig":
        """Apply command-line overrides (--quad-order, --tol, --out)"""
        numerics = self.numerics
        if quad_order is not None:
            if quad_order < 2:
                raise ConfigError(f"quad_order must be at least 2, got {quad_order}", "--quad-order")
            numerics = replace(numerics, quad_order=int(quad_order))
        if tol is not None:
            if not tol > 0:
                raise ConfigError(f"tol must be positive, got {tol}", "--tol")
            numerics = replace(numerics, tol=float(tol))
        model = self.model
        if model is not None and numerics.quad_order != model.quad_order:
            model = model.replace(quad_order=numerics.quad_order)
        output = OutputConfig(out) if out is not None else self.output
        return replace(self, model=model, numerics=numerics, output=output)

    def to_dict(self) -> dict:
        doc = {}
        if self.model_doc is not None:
            doc['model'] = copy.deepcopy(self.model_doc)
        numerics = asdict(self.numerics)
        if numerics['window'] is not None:
            numerics['window'] = list(numerics['window'])
        doc['numerics'] = numerics
        doc['solve'] = asdict(self.solve)
        doc['split'] = asdict(self.split)
        if self.sweep is not None:
            doc['sweep'] = self.sweep.to_dict()
        if self.wavefunction is not None:
            doc['wavefunction'] = self.wavefunction.to_dict()
        doc['output'] = asdict(self.output)
        return doc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RunConfig):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None


# ---------------------------------------------------------------- converters


def _kind(value: Any) -> str:
    if isinstance(value, bool):
        return "a boolean"
    if isinstance(value, dict):
        return "an object"
    if isinstance(value, list):
        return "an array"
    if isinstance(value, str):
        return "a string"
    if isinstance(value, (int, float)):
        return "a number"
    return type(value).__name__


def _number(value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"expected a number, got {_kind(value)}")
    if not np.isfinite(value):
        raise ValueError("expected a finite number")
    return float(value)


def _positive(value: Any) -> float:
    value = _number(value)
    if not value > 0:
        raise ValueError(f"must be positive, got {value!r}")
    return value


def _integer(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"expected an integer, got {_kind(value)}")
    return int(value)


def _boolean(value: Any) -> bool:
    if not isinstance(value, bool):
        raise TypeError(f"expected true or false, got {_kind(value)}")
    return value


def _string(value: Any) -> str:
    if not isinstance(value, str):
        raise TypeError(f"expected a string, got {_kind(value)}")
    return value


def _array(value: Any, item: Callable[[Any], Any]) -> tuple:
    if not isinstance(value, list):
        raise TypeError(f"expected an array, got {_kind(value)}")
    out = []
    for i, v in enumerate(value):
        try:
            out.append(item(v))
        except (TypeError, ValueError) as e:
            raise type(e)(f"item {i}: {e}") from None
    return tuple(out)


def _numbers(value: Any) -> Tuple[float, ...]:
    return _array(value, _number)


def _integers(value: Any) -> Tuple[int, ...]:
    return _array(value, _integer)


def _choice(options: Tuple[str, ...]) -> Callable[[Any], str]:
    def convert(value):
        value = _string(value)
        if value not in options:
            raise ValueError(f"expected one of {list(options)}, got {value!r}")
        return value
    return convert


def _family(value: Any) -> Family:
    value = _string(value)
    try:
        return Family(value)
    except ValueError:
        raise ValueError(f"unknown model family {value!r}; expected one of "
                         f"{[f.value for f in Family]}") from None


def _matrix(value: Any) -> Tuple[Tuple[float, ...], ...]:
    return _array(value, _numbers)


class _Section:
    """One JSON object of the document, consumed key by key"""

    def __init__(self, data: Any, path: str, lines: Dict[str, int]):
        self.path = path
        self.lines = lines
        if not isinstance(data, dict):
            raise self.error(f"expected an object, got {_kind(data)}")
        self.data = data
        self.used = set()

    def where(self, key: Optional[str] = None) -> str:
        if key is None:
            return self.path
        return f"{self.path}.{key}" if self.path else str(key)

    def error(self, reason: str, key: Optional[str] = None) -> ConfigError:
        path = self.where(key)
        return ConfigError(reason, path, self.lines.get(path, self.lines.get(self.path)))

    def get(self, key: str, convert: Callable[[Any], Any], default: Any = _MISSING) -> Any:
        self.used.add(key)
        value = self.data.get(key)
        if value is None:
            if default is _MISSING:
                raise self.error("required key is missing", key)
            return default
        try:
            return convert(value)
        except (TypeError, ValueError) as e:
            raise self.error(str(e), key) from None

    def raw(self, key: str) -> Any:
        self.used.add(key)
        return self.data.get(key)

    def section(self, key: str) -> Optional["_Section"]:
        value = self.raw(key)
        if value is None:
            return None
        return _Section(value, self.where(key), self.lines)

    def finish(self) -> None:
        for key in self.data:
            if key not in self.used:
                raise self.error(f"unknown key {key!r}", key)


# -------------------------------------------------------------------- model


def _flat_point(value: Any, dimension: int) -> FlatPoint:
    if dimension == 1 and not isinstance(value, list):
        value = [value]
    coords = _numbers(value)
    if len(coords) != dimension:
        raise ValueError(f"expected {dimension} coordinate(s), got {len(coords)}")
    return FlatPoint(coords)


def _hyperbolic_point(value: Any, kappa: float, path: str, lines: Dict[str, int]) -> HyperbolicPoint:
    if isinstance(value, dict):
        polar = _Section(value, path, lines)
        radius = polar.get("radius", _number)
        direction = polar.get("direction", _numbers)
        polar.finish()
        return HyperbolicPoint.from_geodesic_polar(radius, direction, kappa)
    return HyperbolicPoint(_numbers(value), kappa)


def _curve(item: _Section) -> Curve:
    shape = item.get("shape", _choice(CURVE_SHAPES))
    if shape == "circle":
        curve = circle(item.get("center", _numbers), item.get("radius", _positive),
                       item.get("samples", _integer, 1024))
    elif shape == "ellipse":
        curve = ellipse(item.get("center", _numbers), item.get("semi_x", _positive),
                        item.get("semi_y", _positive), item.get("samples", _integer, 1024))
    elif shape == "segment":
        curve = segment(item.get("start", _numbers), item.get("end", _numbers),
                        item.get("samples", _integer, 64))
    else:
        curve = polyline(item.get("points", _matrix), item.get("closed", _boolean, False))
    item.finish()
    return curve


def _read_centers(model: _Section, family: Family, kappa: Optional[float]) -> tuple:
    raw = model.raw("centers")
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise model.error(f"expected an array, got {_kind(raw)}", "centers")
    centers = []
    for i, value in enumerate(raw):
        path = f"{model.where('centers')}[{i}]"
        try:
            if family.is_curve:
                centers.append(_curve(_Section(value, path, model.lines)))
            elif family.is_hyperbolic:
                if kappa is None:
                    raise model.error(f"{family.value} requires 'curvature_kappa'", "curvature_kappa")
                centers.append(_hyperbolic_point(value, kappa, path, model.lines))
            else:
                centers.append(_flat_point(value, family.dimension))
        except ConfigError:
            raise
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e), path, model.lines.get(path)) from None
    return tuple(centers)


def _read_model(section: _Section, quad_order: int) -> ModelSpec:
    family = section.get("family", _family)
    kappa = section.get("curvature_kappa", _positive, None)
    kwargs = dict(
        family=family,
        couplings=section.get("couplings_lambda", _numbers, None),
        binding_energies=section.get("binding_energies", _numbers, None),
        mass=section.get("mass_m", _positive, None),
        kappa=kappa,
        distance_matrix=section.get("distance_matrix", _matrix, None),
        degenerate=section.get("degenerate", _boolean, False),
        quad_order=quad_order,
    )
    kwargs['centers'] = _read_centers(section, family, kappa)
    section.finish()

    parameter_key = "couplings_lambda" if family.uses_couplings else "binding_energies"
    try:
        return ModelSpec(**kwargs)
    except (SingularityError, OverlapError, GeometryError) as e:
        raise section.error(str(e), "centers") from None
    except DegeneracyError as e:
        raise section.error(str(e), parameter_key) from None
    except ModelError as e:
        raise section.error(str(e)) from None


# ---------------------------------------------------------- other sections


def _read_numerics(section: Optional[_Section], defaults: Dict[str, Any]) -> NumericsConfig:
    base = NumericsConfig(
        quad_order=int(defaults.get('quad_order', 32)),
        tol=float(defaults.get('tol', 1e-12)),
        brute_force_grid=int(defaults.get('brute_force_grid', 4000)),
        flow_points=int(defaults.get('flow_points', 20)),
    )
    if section is None:
        return base
    numerics = NumericsConfig(
        quad_order=section.get("quad_order", _integer, base.quad_order),
        tol=section.get("tol", _positive, base.tol),
        window=section.get("window", _numbers, None),
        brute_force_grid=section.get("brute_force_grid", _integer, base.brute_force_grid),
        flow_points=section.get("flow_points", _integer, base.flow_points),
    )
    section.finish()
    if numerics.quad_order < 2:
        raise section.error(f"must be at least 2, got {numerics.quad_order}", "quad_order")
    if numerics.brute_force_grid < 3:
        raise section.error(f"must be at least 3, got {numerics.brute_force_grid}", "brute_force_grid")
    if numerics.flow_points < 2:
        raise section.error(f"must be at least 2, got {numerics.flow_points}", "flow_points")
    window = numerics.window
    if window is not None and (len(window) != 2 or not window[0] < window[1]):
        raise section.error(f"window must be [E_min, E_max] with E_min < E_max, got {list(window)}",
                            "window")
    return numerics


def _read_solve(section: Optional[_Section]) -> SolveConfig:
    if section is None:
        return SolveConfig()
    solve = SolveConfig(
        flow=section.get("flow", _boolean, True),
        riesz_check=section.get("riesz_check", _boolean, False),
        cross_check=section.get("cross_check", _boolean, False),
    )
    section.finish()
    return solve


def _read_split(section: Optional[_Section]) -> SplitConfig:
    if section is None:
        return SplitConfig()
    split = SplitConfig(oracle=section.get("oracle", _boolean, None))
    section.finish()
    return split


def _read_sweep(section: Optional[_Section]) -> Optional[SweepConfig]:
    if section is None:
        return None
    sweep = SweepConfig(
        family=section.get("family", _choice(SWEEP_FAMILIES)),
        variable=section.get("variable", _choice(SWEEP_VARIABLES)),
        start=section.get("start", _positive),
        stop=section.get("stop", _positive),
        steps=section.get("steps", _integer),
        lam=section.get("lambda", _positive, None),
        mu=section.get("mu", _positive, None),
        a=section.get("a", _positive, None),
    )
    section.finish()

    if sweep.steps < 2:
        raise section.error(f"invalid range: at least 2 steps are needed, got {sweep.steps}", "steps")
    if not sweep.start < sweep.stop:
        raise section.error(f"invalid range: start {sweep.start!r} must be below stop {sweep.stop!r}",
                            "stop")
    point1d = sweep.family == "Point1D"
    if sweep.variable == "lambda" and not point1d:
        raise section.error("the coupling λ can only be swept for Point1D", "variable")
    if sweep.variable == "mu" and point1d:
        raise section.error("Point1D is parametrized by λ; sweep 'lambda' instead of 'mu'", "variable")
    needed = {"a": "a", "lambda": "lam", "mu": "mu"}
    fixed = ["a", "lambda" if point1d else "mu"]
    for key in fixed:
        if key != sweep.variable and getattr(sweep, needed[key]) is None:
            raise section.error(f"{sweep.family} sweeps over {sweep.variable!r} need a fixed '{key}'", key)
    for key in needed:
        if key not in fixed and getattr(sweep, needed[key]) is not None:
            raise section.error(f"{sweep.family} does not take '{key}'", key)
        if key == sweep.variable and getattr(sweep, needed[key]) is not None:
            raise section.error(f"'{key}' is the sweep variable and cannot also be fixed", key)
    return sweep


def _read_wavefunction(section: Optional[_Section], model: Optional[ModelSpec]) -> Optional[WavefunctionConfig]:
    if section is None:
        return None
    state = section.get("state", _integer, 0)
    grid = section.section("grid")
    if grid is None:
        raise section.error("required key is missing", "grid")
    wf = WavefunctionConfig(
        state=state,
        lower=grid.get("lower", _numbers),
        upper=grid.get("upper", _numbers),
        points=grid.get("points", _integers),
        correction_center=section.get("correction_center", _integer, None),
    )
    grid.finish()
    section.finish()

    if state < 0:
        raise section.error(f"must be non-negative, got {state}", "state")
    if not len(wf.lower) == len(wf.upper) == len(wf.points) or len(wf.lower) not in (1, 2, 3):
        raise grid.error("lower, upper and points need one entry per axis (1 to 3 axes)")
    if any(lo >= hi for lo, hi in zip(wf.lower, wf.upper)):
        raise grid.error("every lower bound must lie below its upper bound", "upper")
    if any(n < 2 for n in wf.points):
        raise grid.error("every axis needs at least 2 points", "points")
    if model is not None and wf.dimension != model.dimension:
        raise grid.error(f"grid has {wf.dimension} axes but {model.family.value} lives in "
                         f"{model.dimension} dimension(s)")
    if wf.correction_center is not None and model is not None \
            and not 0 <= wf.correction_center < model.size:
        raise section.error(f"no center {wf.correction_center} in a {model.size}-center model",
                            "correction_center")
    return wf


def _read_output(section: Optional[_Section]) -> OutputConfig:
    if section is None:
        return OutputConfig()
    output = OutputConfig(path=section.get("path", _string, None))
    section.finish()
    return output


# -------------------------------------------------------------------- parse


def _line_index(node: yaml.Node, path: str, lines: Dict[str, int]) -> None:
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            child = f"{path}.{key_node.value}" if path else str(key_node.value)
            lines[child] = key_node.start_mark.line + 1
            _line_index(value_node, child, lines)
    elif isinstance(node, yaml.SequenceNode):
        for i, item in enumerate(node.value):
            child = f"{path}[{i}]"
            lines[child] = item.start_mark.line + 1
            _line_index(item, child, lines)


def _load(text: str, source: str) -> Tuple[Any, Dict[str, int]]:
    if not text.strip():
        raise ConfigError("empty document", source)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed document: {e.msg} (column {e.colno})", source, e.lineno) from None
    if data is None:
        raise ConfigError("empty document", source)

    # YAML rejects tab indentation, which JSON allows
    try:
        node = yaml.compose(text.replace("\t", " "), Loader=yaml.SafeLoader)
    except yaml.YAMLError as e:
        logger.debug(f"{source or '<document>'}: no line index ({e})")
        return data, {}
    lines = {"": node.start_mark.line + 1}
    _line_index(node, "", lines)
    return data, lines


def parse_config(text: str, source: str = "", defaults: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Validate a run document.

    Args:
        text: UTF-8 JSON document
        source: file name used in error messages
        defaults: numerics defaults (the ``numerics`` section of the
            runtime settings); document values take precedence

    Returns:
        A RunConfig whose model, when present, satisfies every ModelSpec
        invariant.

    Raises:
        ConfigError: malformed JSON, a schema violation (path and reason)
            or a model invariant violation (the constraint is quoted).
    """
    data, lines = _load(text, source)
    root = _Section(data, "", lines)
    numerics = _read_numerics(root.section("numerics"),
                              defaults or get_default_settings()['numerics'])

    model = model_doc = None
    model_section = root.section("model")
    if model_section is not None:
        model_doc = copy.deepcopy(model_section.data)
        model = _read_model(model_section, numerics.quad_order)

    config = RunConfig(
        model=model,
        model_doc=model_doc,
        numerics=numerics,
        solve=_read_solve(root.section("solve")),
        split=_read_split(root.section("split")),
        sweep=_read_sweep(root.section("sweep")),
        wavefunction=_read_wavefunction(root.section("wavefunction"), model),
        output=_read_output(root.section("output")),
    )
    root.finish()
    return config
