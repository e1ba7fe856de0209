"""
Writes run artifacts: per-time CSV files, the diagnostics series, an optional
gnuplot script and a YAML manifest with checksums of everything written.
"""

import hashlib
import logging
import os

import numpy as np
import scipy
import yaml

from spinflow.__version__ import __version__
from spinflow.errors import ExportError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.16e'

PLOT_TEMPLATE = """\
# gnuplot script: curve on the unit sphere next to Re q at each output time
set terminal pngcairo size 1200,500
set datafile separator ','
set view equal xyz
set parametric
set isosamples 24,12
set urange [0:2*pi]
set vrange [-pi/2:pi/2]
"""


def sha256sum(path) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as file:
        for chunk in iter(lambda: file.read(65536), b''):
            digest.update(chunk)
    return digest.hexdigest()


class RunExporter:
    def __init__(self, outdir, plots=True):
        self.outdir = outdir
        self.plots = plots
        self._written = []

    def _path(self, *parts):
        path = os.path.join(self.outdir, *parts)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        return path

    def _write_table(self, relpath, header, columns):
        path = self._path(*relpath.split('/'))
        np.savetxt(path, np.column_stack(columns), fmt=FLOAT_FORMAT, delimiter=',', header=header, comments='')
        self._written.append(relpath)
        return path

    def write_curves(self, folder, curves, columns=('r1', 'r2', 'r3')):
        for k, curve in enumerate(curves):
            grid = curve.grid
            self._write_table(
                f'{folder}/t_{k:04d}.csv', ','.join(('x',) + tuple(columns)),
                [grid.x, curve.points[:, 0], curve.points[:, 1], curve.points[:, 2]],
            )

    def write_invariants(self, folder, fields):
        for k, q in enumerate(fields):
            self._write_table(
                f'{folder}/t_{k:04d}.csv', 'x,re_q,im_q', [q.grid.x, q.values.real, q.values.imag],
            )

    def write_diagnostics(self, report):
        relpath = 'diagnostics.csv'
        rows = np.array(list(report.rows()), dtype=float)
        np.savetxt(self._path(relpath), rows, fmt=FLOAT_FORMAT, delimiter=',',
                   header=','.join(report.columns()), comments='')
        self._written.append(relpath)

    def write_plots(self, times):
        lines = [PLOT_TEMPLATE]
        for k, t in enumerate(times):
            lines.append(
                f"set output 'frame_{k:04d}.png'\n"
                f"set multiplot layout 1,2 title 't = {t:.6g}'\n"
                "splot cos(u)*cos(v),sin(u)*cos(v),sin(v) with lines lc rgb '#dddddd' notitle, \\\n"
                f"      'frames/t_{k:04d}.csv' every ::1 using 2:3:4 with lines lw 2 title 'curve'\n"
                "unset parametric\n"
                f"plot 'invariant/t_{k:04d}.csv' every ::1 using 1:2 with lines title 'Re q'\n"
                "set parametric\n"
                "unset multiplot\n"
            )
        relpath = 'plots.gp'
        with open(self._path(relpath), 'w') as file:
            file.write('\n'.join(lines))
        self._written.append(relpath)

    def manifest(self, run) -> dict:
        lift = run.lift
        doc = {
            'config': run.config,
            'versions': {'spinflow': __version__, 'numpy': np.__version__, 'scipy': scipy.__version__},
            'lift': {
                'c0': float(lift.c0),
                'branch_sign': int(lift.branch_sign),
                'monodromy': [[[float(z.real), float(z.imag)] for z in row] for row in lift.monodromy.matrix],
                'period': float(run.period),
            },
            'files': {relpath: sha256sum(os.path.join(self.outdir, relpath)) for relpath in sorted(self._written)},
        }
        if run.report is not None:
            doc['diagnostics'] = run.report.summary()
        if run.backlund is not None:
            bt = run.backlund
            doc['backlund'] = {
                'alpha': [float(bt.params.alpha.real), float(bt.params.alpha.imag)],
                'sphere_deviation': float(bt.sphere_deviation),
                'closure_tail': float(bt.closure_tail),
                'nls_residual': None if bt.nls_residual is None else float(bt.nls_residual),
                'pde_residual': None if bt.pde_residual is None else float(bt.pde_residual),
            }
        if run.filament_meta:
            doc['filaments'] = {
                route: {k: float(v) if isinstance(v, (float, np.floating)) else v for k, v in meta.items()}
                for route, meta in run.filament_meta.items()
            }
        return doc

    def export(self, run) -> str:
        try:
            os.makedirs(self.outdir, exist_ok=True)
            self._written = []
            if run.curves:
                self.write_curves('frames', run.curves)
                self.write_invariants('invariant', run.output_invariants())
            else:
                self.write_invariants('invariant', [run.lift.invariant()])
            if run.report is not None:
                self.write_diagnostics(run.report)
            if run.backlund is not None:
                self.write_curves('backlund/frames', run.backlund.curves)
                self.write_invariants('backlund/invariant', run.backlund.q_tilde)
            for route, filaments in run.filaments.items():
                self.write_curves(f'filaments/{route}', [f.rescaled() for f in filaments], ('a1', 'a2', 'a3'))
            if self.plots and run.curves:
                self.write_plots([c.t for c in run.curves])

            path = os.path.join(self.outdir, 'manifest.yaml')
            with open(path, 'w') as file:
                yaml.safe_dump(self.manifest(run), file, sort_keys=True)
        except OSError as e:
            raise ExportError(f"Could not write run artifacts to {self.outdir}: {e}") from e
        logger.info(f"Exported {len(self._written)} files and the manifest to {self.outdir}")
        return path


def export_run(run, outdir, plots=True) -> str:
    return RunExporter(outdir, plots).export(run)
