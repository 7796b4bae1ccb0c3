#!/usr/bin/env python3
"""
🧮 KREIN COMMANDS
============================================================
solve, split, sweep and wavefunction: each takes a validated
RunConfig and returns a JSON-ready report (solve, split) or a
pandas DataFrame (sweep, wavefunction). Emission is separate so
the runner decides between stdout and a file.
"""

import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from itertools import product
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..exact import (brute_force_detroot, exact_two_center_1d, exact_two_center_3d,
                     numeric_two_center_2d)
from ..models import Family, ModelSpec
from ..perturbation import (asymptotic_splitting, curve_shift, degenerate_splitting,
                            family_shift_closed_form, perturbative_shift, wavefunction_correction)
from ..spectra import (BoundState, branch_flow, curve_wavefunction, find_bound_states, flow_grid,
                       riesz_projection_check, wavefunction)
from ..utils.errors import (ContourError, DomainError, ExactSolutionError, NoBoundStatesError,
                            UnsupportedFamilyError)
from .config import RunConfig, SweepConfig

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'
EQUAL_RTOL = 1e-12
CENTER_EXCLUSION = 1e-12
AXES = ("x", "y", "z")


# ------------------------------------------------------------------ output


def _jsonable(value: Any) -> Any:
    """Plain JSON types; non-finite floats become null"""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if np.isfinite(value) else None
    return value


def _write(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        logger.info(f"💾 Output written: {path}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def render_json(report: Dict[str, Any]) -> str:
    return json.dumps(_jsonable(report), indent=2, ensure_ascii=False) + '\n'


def render_csv(frame: pd.DataFrame) -> str:
    """17 significant digits, '.' decimal point, '\\n' line endings"""
    return frame.to_csv(None, float_format=FLOAT_FORMAT, lineterminator='\n', index=False, na_rep='nan')


def write_json(report: Dict[str, Any], path: Optional[str] = None) -> None:
    _write(render_json(report), path)


def write_csv(frame: pd.DataFrame, path: Optional[str] = None) -> None:
    _write(render_csv(frame), path)


# ------------------------------------------------------------------- solve


def _window(config: RunConfig):
    window = config.numerics.window
    return (None, None) if window is None else window


def _solve_states(config: RunConfig, model: ModelSpec) -> List[BoundState]:
    e_min, e_max = _window(config)
    states = find_bound_states(model, e_min, e_max, rtol=config.numerics.tol)
    if not states:
        where = "" if config.numerics.window is None else f" {list(config.numerics.window)}"
        raise NoBoundStatesError(f"no bound states in window{where}")
    return states


def _flow_diagnostics(config: RunConfig, model: ModelSpec) -> Dict[str, Any]:
    e_min, e_max = _window(config)
    grid = flow_grid(model, config.numerics.flow_points, e_min, e_max)
    flows = branch_flow(model, grid)
    branches = [{'branch': f.branch, 'violations': f.violations, 'ambiguous': list(f.ambiguous)}
                for f in flows]
    total = sum(f.violations for f in flows)
    if total:
        logger.warning(f"⚠️ {total} monotonicity violation(s) on the eigenvalue flow")
    return {'grid': [float(grid[0]), float(grid[-1]), len(grid)], 'branches': branches, 'violations': total}


def _cross_check(config: RunConfig, model: ModelSpec, states: List[BoundState]) -> Dict[str, Any]:
    roots = brute_force_detroot(model, config.numerics.window, config.numerics.brute_force_grid)
    energies = [s.energy for s in states]
    if len(roots) != len(energies):
        logger.warning(f"⚠️ brute force found {len(roots)} root(s), the branch solver {len(energies)}")
        return {'energies': roots, 'max_deviation': None}
    deviation = max(abs(r - e) for r, e in zip(sorted(roots), energies))
    return {'energies': roots, 'max_deviation': deviation}


def _riesz_residuals(model: ModelSpec, states: List[BoundState]) -> List[Optional[float]]:
    residuals = []
    for state in states:
        try:
            residuals.append(riesz_projection_check(model, state))
        except ContourError as e:
            logger.warning(f"⚠️ riesz check skipped for E = {state.energy:.12g}: {e}")
            residuals.append(None)
    return residuals


def cmd_solve(config: RunConfig) -> Dict[str, Any]:
    """
    Bound states of the configured model.

    Raises:
        NoBoundStatesError: the window holds no root of det Φ.
    """
    model = config.require_model()
    states = _solve_states(config, model)
    diagnostics: Dict[str, Any] = {}
    if config.solve.flow:
        diagnostics['flow'] = _flow_diagnostics(config, model)
    if config.solve.riesz_check:
        diagnostics['riesz_residuals'] = _riesz_residuals(model, states)
    if config.solve.cross_check:
        diagnostics['brute_force'] = _cross_check(config, model, states)

    logger.info(f"🎯 solve: {len(states)} state(s), ground E = {states[0].energy:.15g}")
    return {
        'command': 'solve',
        'family': model.family.value,
        'size': model.size,
        'energies': [s.energy for s in states],
        'eigenvectors': [s.eigenvector for s in states],
        'alphas': [s.alpha for s in states],
        'states': [s.to_dict() for s in states],
        'diagnostics': diagnostics,
        'config': config.to_dict(),
    }


# ------------------------------------------------------------------- split


def _identical_pair(model: ModelSpec) -> bool:
    if model.size != 2:
        return False
    p = model.parameters
    return abs(p[0] - p[1]) <= EQUAL_RTOL * max(abs(p[0]), abs(p[1]), 1e-300)


def _two_center_oracle(model: ModelSpec, a: float) -> Optional[Dict[str, Any]]:
    """Exact levels of an identical pair: closed forms for flat points, the full solver otherwise"""
    try:
        if model.family is Family.POINT_1D:
            return exact_two_center_1d(model.couplings[0], a).to_dict()
        if model.family is Family.POINT_2D:
            return numeric_two_center_2d(np.sqrt(-model.binding_energies[0]), a).to_dict()
        if model.family is Family.POINT_3D:
            return exact_two_center_3d(np.sqrt(-model.binding_energies[0]), a).to_dict()
    except ExactSolutionError as e:
        logger.warning(f"⚠️ no exact two-center oracle: {e}")
        return None
    states = find_bound_states(model)
    if len(states) != 2:
        logger.warning(f"⚠️ full solver found {len(states)} level(s); no oracle splitting")
        return None
    return {
        'family': model.family.value,
        'half_separation': a,
        'e_minus': states[0].energy,
        'e_plus': states[1].energy,
        'splitting': states[1].energy - states[0].energy,
        'method': 'principal-matrix',
    }


def _relative(value: Optional[float], reference: Optional[float]) -> Optional[float]:
    if value is None or reference is None or reference == 0.0:
        return None
    return abs(value - reference) / abs(reference)


def _split_degenerate(model: ModelSpec, oracle: bool) -> Dict[str, Any]:
    result = degenerate_splitting(model)
    report = {'mode': 'degenerate', 'degenerate': result.to_dict()}
    if oracle:
        exact = _two_center_oracle(model, result.half_separation)
        reference = exact['splitting'] if exact else None
        report['oracle'] = exact
        report['relative_error'] = _relative(result.asymptotic, reference)
        report['truncated_relative_error'] = _relative(result.splitting, reference)
    return report


def _closed_form(model: ModelSpec, k: int) -> Optional[float]:
    try:
        return family_shift_closed_form(model, k)
    except (UnsupportedFamilyError, DomainError) as e:
        logger.debug(f"level {k}: no closed form ({e})")
        return None


def _attach_oracle(model: ModelSpec, reports: list) -> list:
    states = find_bound_states(model)
    if len(states) != len(reports):
        logger.warning(f"⚠️ full solver found {len(states)} level(s) for {len(reports)} center(s); "
                       f"no oracle attached")
        return reports
    order = sorted(range(len(reports)), key=lambda k: reports[k].zeroth_order)
    out = list(reports)
    for k, state in zip(order, states):
        out[k] = reports[k].with_oracle(state.energy)
    return out


def cmd_split(config: RunConfig) -> Dict[str, Any]:
    """
    Tunneling shifts of every level.

    Identical two-center models go through degenerate_splitting, curve
    models through curve_shift, everything else through
    perturbative_shift next to the family closed form. The oracle (exact
    two-center solution or full solver) is on by default for N ≤ 2.
    """
    model = config.require_model()
    oracle = config.split.oracle if config.split.oracle is not None else model.size <= 2
    report: Dict[str, Any] = {'command': 'split', 'family': model.family.value, 'size': model.size}

    if _identical_pair(model):
        report.update(_split_degenerate(model, oracle))
    else:
        reports = [perturbative_shift(model, k) for k in range(model.size)]
        if oracle:
            reports = _attach_oracle(model, reports)
        levels = []
        for k, r in enumerate(reports):
            level = r.to_dict()
            if model.family.is_curve:
                level['curve'] = curve_shift(model, k).to_dict() if model.size > 1 else None
            else:
                closed = _closed_form(model, k)
                level['closed_form'] = closed
                level['closed_form_ratio'] = closed / r.shift if closed is not None and r.shift else None
            if not oracle:
                del level['oracle_energy'], level['relative_error']
            levels.append(level)
        report['mode'] = 'curve' if model.family.is_curve else 'nondegenerate'
        report['levels'] = levels

    report['config'] = config.to_dict()
    return report


# ------------------------------------------------------------------- sweep


def sweep_point(sweep: SweepConfig, value: float) -> Dict[str, float]:
    """Exact and first-order splitting of one sweep point"""
    params = {'a': sweep.a, 'lambda': sweep.lam, 'mu': sweep.mu}
    params[sweep.variable] = float(value)
    a = params['a']
    family = Family(sweep.family)
    if family is Family.POINT_1D:
        lam = params['lambda']
        perturbative = asymptotic_splitting(family, -0.25 * lam ** 2, a, lam)
        solve = partial(exact_two_center_1d, lam, a)
    else:
        mu = params['mu']
        perturbative = asymptotic_splitting(family, -mu ** 2, a)
        solver = numeric_two_center_2d if family is Family.POINT_2D else exact_two_center_3d
        solve = partial(solver, mu, a)
    try:
        exact = solve().splitting
    except ExactSolutionError as e:
        logger.warning(f"⚠️ {sweep.variable} = {value:.6g}: {e}")
        exact = float('nan')
    return {
        sweep.variable: float(value),
        'delta_exact': exact,
        'delta_perturbative': perturbative,
        'rel_error': abs(perturbative - exact) / exact,
    }


def cmd_sweep(config: RunConfig, threads: int = 1) -> pd.DataFrame:
    """
    Splitting table of two identical centers over the sweep range.

    Points run concurrently on ``threads`` workers; rows come back in
    ascending sweep order.
    """
    sweep = config.sweep
    if sweep is None:
        raise DomainError("the sweep command needs a 'sweep' section")
    values = sweep.values()
    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as executor:
        rows = list(executor.map(partial(sweep_point, sweep), values))
    logger.info(f"📈 sweep over {sweep.variable}: {len(rows)} point(s) on {threads} thread(s)")
    return pd.DataFrame(rows, columns=[sweep.variable, 'delta_exact', 'delta_perturbative', 'rel_error'])


# ------------------------------------------------------------ wavefunction


def _grid_points(lower, upper, points) -> np.ndarray:
    axes = [np.linspace(lo, hi, n) for lo, hi, n in zip(lower, upper, points)]
    return np.array(list(product(*axes)), dtype=float)


def _off_center(model: ModelSpec, pts: np.ndarray) -> np.ndarray:
    """Mask of grid points away from every point center (all points in 1D)"""
    if model.dimension == 1 or model.family.is_curve:
        return np.ones(len(pts), dtype=bool)
    centers = np.array([c.coords for c in model.centers])
    scale = max(1.0, float(np.max(np.abs(centers))))
    r = np.linalg.norm(pts[:, None, :] - centers[None, :, :], axis=-1)
    return np.all(r > CENTER_EXCLUSION * scale, axis=1)


def _curve_mask(model: ModelSpec, pts: np.ndarray) -> np.ndarray:
    keep = np.ones(len(pts), dtype=bool)
    for curve in model.centers:
        nodes = curve.point_at(np.linspace(0.0, curve.length, 512))
        r = np.linalg.norm(pts[:, None, :] - nodes[None, :, :], axis=-1).min(axis=1)
        keep &= r > 0.5 * curve.length / 512
    return keep


def cmd_wavefunction(config: RunConfig) -> pd.DataFrame:
    """
    ψ on the configured rectangular grid.

    Grid cells on a center are left out. Point2D models may add the
    first-order correction δψ of the level belonging to
    ``correction_center``. Curve models give the unnormalized shape.

    Raises:
        UnsupportedFamilyError: hyperbolic or relativistic families, or a
            correction column for anything but Point2D.
        DomainError: the requested state index does not exist.
    """
    model = config.require_model()
    wf = config.wavefunction
    if wf is None:
        raise DomainError("the wavefunction command needs a 'wavefunction' section")
    if not (model.family.is_flat_point or model.family.is_curve):
        raise UnsupportedFamilyError(f"wavefunctions are implemented for flat point and curve "
                                     f"families, not {model.family.value}")
    if wf.correction_center is not None and model.family is not Family.POINT_2D:
        raise UnsupportedFamilyError(f"the correction column is defined for Point2D, not {model.family.value}")

    states = _solve_states(config, model)
    if wf.state >= len(states):
        raise DomainError(f"state {wf.state} requested but only {len(states)} bound state(s) found")
    state = states[wf.state]

    pts = _grid_points(wf.lower, wf.upper, wf.points)
    if model.family.is_curve:
        pts = pts[_curve_mask(model, pts)]
        psi = np.atleast_1d(curve_wavefunction(state, model, pts))
    else:
        pts = pts[_off_center(model, pts)]
        psi = np.atleast_1d(wavefunction(state, model, pts[:, 0] if model.dimension == 1 else pts))

    frame = pd.DataFrame(pts, columns=list(AXES[:model.dimension]))
    frame['psi'] = psi
    if wf.correction_center is not None:
        frame['delta_psi'] = np.atleast_1d(wavefunction_correction(model, wf.correction_center, pts))
    logger.info(f"🌊 wavefunction of state {wf.state} (E = {state.energy:.12g}) on {len(frame)} point(s)")
    return frame
