"""
This module runs the periodic Cauchy problem end to end: lift the initial
curve, solve NLS, evolve and reconstruct the frame, then optionally apply a
Bäcklund transformation and build vortex filaments.
"""

import logging
import os
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from spinflow.backlund import BacklundResult, BtParams, bt_apply, frame_at_complex_lambda
from spinflow.curves import LIBRARY, CurveState, great_circle_exact, library_curve, library_filament
from spinflow.diagnostics import DiagnosticsReport, conservation_report
from spinflow.errors import ArclengthDriftWarning, ConfigError
from spinflow.exporter import RunExporter
from spinflow.frames import (
    closure_defect, evolve_frame, pde_residual, pde_residual_series, reconstruct, zero_curvature_residual,
    zero_curvature_series,
)
from spinflow.lift import LiftResult, lift_curve
from spinflow.nls import NlsTrajectory, nls_residual, nls_solve
from spinflow.reader import CurveReader
from spinflow.spectral import PeriodicGrid
from spinflow.vfe import (
    arclength_reparametrize, filament_from_flow, hframe_lift, max_arclength_defect, sym_reconstruct, vfe_residual,
)

logger = logging.getLogger(__name__)

EXACT_SOLUTIONS = {'great_circle': great_circle_exact}


@dataclass
class RunArtifacts:
    config: dict
    curve: CurveState
    lift: LiftResult
    period: float = 2 * np.pi
    trajectory: Optional[NlsTrajectory] = None
    frames: list = field(default_factory=list)
    curves: list = field(default_factory=list)
    report: Optional[DiagnosticsReport] = None
    backlund: Optional[BacklundResult] = None
    filaments: dict = field(default_factory=dict)
    filament_meta: dict = field(default_factory=dict)

    def output_invariants(self):
        """q̃ at each output time."""
        traj = self.trajectory
        return [traj.full_step(int(round(f.t / traj.dt))) for f in self.frames]


class Pipeline:
    def __init__(self, config):
        self.config = config
        self.grid = PeriodicGrid(config['grid']['n'])

    def load_curve(self):
        name = self.config['curve']
        lift_config = self.config['lift']
        if name in LIBRARY:
            try:
                return library_curve(name, self.grid), 2 * np.pi
            except ValueError as e:
                raise ConfigError(f"Invalid configuration at key 'curve': {e}") from None
        if os.path.isfile(name):
            reader = CurveReader(name)
            return reader.curve(self.grid.n, lift_config['tail_threshold']), reader.period
        raise ConfigError(f"Invalid configuration at key 'curve': '{name}' is neither a library curve nor a file")

    def lift(self):
        curve, period = self.load_curve()
        c = self.config['lift']
        lift = lift_curve(curve, c['branch'], c['eps_sing'], c['safety_radius'], c['tail_threshold'])
        return RunArtifacts(self.config, curve, lift, period)

    def _solve(self, q0, t_final, dt):
        c = self.config['nls']
        return nls_solve(q0, t_final, dt, c['scheme'], c['tol_fp'], c['max_iter'], c['dealias'])

    def run(self, backlund=None, vfe_route=None) -> RunArtifacts:
        time = self.config['time']
        backlund = self.config['backlund']['enabled'] if backlund is None else backlund
        vfe_route = self.config['vfe']['route'] if vfe_route is None else vfe_route
        logger.info(
            f"Running curve '{self.config['curve']}' on N={self.grid.n} with dt={time['dt']} "
            f"up to T={time['t_final']} ({self.config['nls']['scheme']}, {self.config['lift']['branch']} branch)"
        )

        run = self.lift()
        lift = run.lift
        traj = self._solve(lift.invariant(), time['t_final'], time['dt'])
        run.trajectory = traj
        run.frames = evolve_frame(lift, traj, time['output_every'])
        run.curves = reconstruct(run.frames, lift.c0, lift.rotation)

        residuals = {
            'zero_curvature': zero_curvature_residual(traj, lift.lam0),
            'nls': nls_residual(traj.values(), traj.grid, traj.dt, traj.sigma) if traj.steps >= 2 else None,
            'pde': pde_residual(run.curves) if len(run.curves) >= 3 else None,
        }
        series = {
            'zero_curvature': zero_curvature_series(traj, lift.lam0, [c.t for c in run.curves]),
            'pde': pde_residual_series(run.curves),
        }
        closure = [closure_defect(f, q) for f, q in zip(run.frames, run.output_invariants())]
        run.report = conservation_report(
            traj, run.curves, run.frames, EXACT_SOLUTIONS.get(self.config['curve']), residuals,
            residual_series=series,
            metadata={
                'n': self.grid.n, 'dt': time['dt'], 't_final': time['t_final'],
                'scheme': self.config['nls']['scheme'], 'branch': self.config['lift']['branch'],
            },
        )
        run.report.closure = closure

        if backlund:
            run.backlund = self.backlund(run)
        if vfe_route in ('antiderivative', 'both'):
            run.filaments['antiderivative'] = filament_from_flow(run.curves)
        if vfe_route in ('sym', 'both'):
            run.filaments['sym'] = self.sym_filaments(run)
        for route, filaments in run.filaments.items():
            if len(filaments) >= 3:
                run.filament_meta.setdefault(route, {})['vfe_residual'] = vfe_residual(filaments)
        return run

    def backlund(self, run: RunArtifacts) -> BacklundResult:
        params = BtParams.from_config(self.config['backlund'])
        every = self.config['time']['output_every']
        alpha_frames = frame_at_complex_lambda(run.lift, run.trajectory, params.alpha, every)
        return bt_apply(run.lift, run.trajectory, run.frames, alpha_frames, params)

    def sym_filaments(self, run: RunArtifacts) -> list:
        time = self.config['time']
        vfe = self.config['vfe']
        try:
            points = library_filament(vfe['seed'], self.grid)
        except (KeyError, ValueError) as e:
            raise ConfigError(f"Invalid configuration at key 'vfe.seed': {e}") from None
        seed = arclength_reparametrize(points, self.grid)
        frame, q0, phi = hframe_lift(seed, self.config['lift']['tail_threshold'])

        substeps = vfe['substeps']
        while True:
            # filament time is σ times the NLS clock
            dt = time['dt'] / q0.sigma / substeps
            traj = self._solve(q0, time['t_final'] / q0.sigma, dt)
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter('always', ArclengthDriftWarning)
                filaments = sym_reconstruct(
                    phi, traj, frame.c0, seed.points[0], vfe['dlambda'], seed.scale,
                    time['output_every'] * substeps,
                )
            drifted = [w for w in caught if issubclass(w.category, ArclengthDriftWarning)]
            if not drifted or substeps >= vfe['max_substeps']:
                break
            substeps *= 2
            logger.info(f"Sym filaments off arclength by {max_arclength_defect(filaments):.3e}; "
                        f"retrying with {substeps} NLS steps per time step")
        for w in caught:
            warnings.warn(w.message, w.category)

        run.filament_meta['sym'] = {
            'seed': vfe['seed'], 'c0': float(frame.c0), 'scale': float(seed.scale), 'substeps': substeps,
            'arclength_defect': max_arclength_defect(filaments),
        }
        return filaments


def run_pipeline(config) -> RunArtifacts:
    """Run everything the configuration enables and write the artifacts to `output.dir`."""
    run = Pipeline(config).run()
    RunExporter(config['output']['dir'], config['output']['plots']).export(run)
    return run
