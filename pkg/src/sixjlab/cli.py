"""Command-line front end: ``sixjlab {validate,sixj,symmetrize,levinwen}``.

Exit codes: 0 when every check passes, 1 when one fails or a precondition
refuses the input, 2 when the category or patch cannot be loaded.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import __version__
from .catcore import CategoryData, CategoryLoadError, load_category, total_dim_sq
from .sixj import (HypothesisError, LOOP_TOL, SingularFMatrixError, check_loop_identity,
                   check_mirror_conjugate, check_sixj_unitarity, check_tetrahedral, compute_minus,
                   compute_plus, dump_table)
from .symmetrize import WrongCategoryError, e_obstruction, search_symmetric_gauge
from .verify import (PENTAGON_TOL, UNITARITY_TOL, VerificationReport, check_dim_consistency,
                     check_inverse_data, check_pentagon, check_unitarity)

EXIT_OK, EXIT_FAIL, EXIT_LOAD = 0, 1, 2


class Output:
    """Single output stream in either human text or ``key=value`` records."""

    def __init__(self, fmt: str, timing: bool):
        self.records = fmt == 'records'
        self.timing = timing
        self.lines: list[str] = []

    def line(self, text: str = ''):
        self.lines.append(text)

    def info(self, key: str, **fields):
        if self.records:
            self.line(' '.join([key] + [f'{k}={v}' for k, v in fields.items()]))
        else:
            self.line(f'{key}: ' + ', '.join(f'{k} {v}' for k, v in fields.items()))

    def report(self, rep: VerificationReport):
        self.line(rep.record(self.timing) if self.records else str(rep))

    def write(self, path: str | None):
        text = '\n'.join(self.lines) + '\n'
        if path:
            with open(path, 'w') as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


@dataclass
class RunConfig:
    command: str
    category: str
    patch: str | None = None
    tol: float | None = None
    seed: int = 0
    restarts: int = 20
    iters: int = 500
    gauge_class: str = 'block'
    out: str | None = None
    format: str = 'text'
    allow_nonunitary: bool = False
    require_tetrahedral: bool = False
    timing: bool = False

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise ValueError('--tol must be positive')


def _dims_line(out: Output, cat: CategoryData):
    # D^2 is read as the sum of squared quantum dimensions
    out.info('category', name=cat.name, rank=cat.rank, D2=f'{total_dim_sq(cat):.12g}',
             D2_reading='sum_of_squared_dims')


def _summary(out: Output, cfg: RunConfig, reports, informational=()) -> int:
    """Closing record; failures of checks named in `informational` are listed
    but do not set the exit code."""
    failed = [r.name for r in reports if not r.passed and r.name not in informational]
    noted = [r.name for r in reports if not r.passed and r.name in informational]
    ok = not failed
    out.info('summary', command=cfg.command, category=cfg.category, checks=len(reports),
             failed=len(failed), informational_failures=len(noted),
             result='pass' if ok else 'fail')
    return EXIT_OK if ok else EXIT_FAIL


def cmd_validate(cfg: RunConfig, cat: CategoryData, out: Output) -> int:
    reps = [check_pentagon(cat, cfg.tol or PENTAGON_TOL),
            check_unitarity(cat, cfg.tol or UNITARITY_TOL),
            check_dim_consistency(cat, cfg.tol or PENTAGON_TOL)]
    reps += [check_inverse_data(cat, inv, key, cfg.tol or PENTAGON_TOL)
             for key, inv in cat.inverses.items()]
    for r in reps:
        out.report(r)
    return _summary(out, cfg, reps)


def cmd_sixj(cfg: RunConfig, cat: CategoryData, out: Output) -> int:
    if not cfg.allow_nonunitary:
        rep = check_unitarity(cat)
        if not rep.passed:
            out.info('refused', reason='non-unitary F-data (pass --allow-nonunitary to override)',
                     residual=f'{rep.residual:.3e}')
            return EXIT_FAIL
    tol = cfg.tol or UNITARITY_TOL
    plus = compute_plus(cat)
    try:
        minus = compute_minus(cat)
    except SingularFMatrixError as err:
        out.info('refused', reason=str(err).replace(' ', '_'))
        return EXIT_FAIL
    reps = [check_mirror_conjugate(plus, minus, tol), check_sixj_unitarity(plus, tol),
            check_sixj_unitarity(minus, tol), check_loop_identity(cat, plus, cfg.tol or LOOP_TOL),
            check_tetrahedral(plus, minus, tol)]
    for r in reps:
        out.report(r)
    for table in (plus, minus):
        out.line(dump_table(table).rstrip('\n'))
    informational = () if cfg.require_tetrahedral else ('tetrahedral',)
    return _summary(out, cfg, reps, informational=informational)


def cmd_symmetrize(cfg: RunConfig, cat: CategoryData, out: Output) -> int:
    try:
        wit = e_obstruction(cat)
    except WrongCategoryError:
        wit = None
    if wit is not None:
        out.line(wit.record())
    res = search_symmetric_gauge(cat, cfg.gauge_class, cfg.restarts, cfg.iters, cfg.seed)
    out.line(res.record())
    out.info('summary', command=cfg.command, category=cfg.category,
             obstruction='-' if wit is None else int(wit.certified),
             floor=f'{res.objective:.6e}', result='info')
    return EXIT_OK


def cmd_levinwen(cfg: RunConfig, cat: CategoryData, out: Output, patch) -> int:
    from .levinwen import certify, spectrum, build_H
    tol = cfg.tol or 1e-8
    try:
        reps = certify(patch, cat, tol=tol, allow_nonunitary=cfg.allow_nonunitary)
        H, _ = build_H(patch, cat, allow_nonunitary=cfg.allow_nonunitary)
    except HypothesisError as err:
        out.info('refused', reason='non-unitary F-data (pass --allow-nonunitary to override)',
                 detail=str(err).split(';')[0].replace(' ', '_'))
        return EXIT_FAIL
    out.info('patch', name=patch.name, plaquettes=len(patch.plaquettes),
             edges=len(patch.edges), states=H.dim)
    for r in reps:
        out.report(r)
    sp = spectrum(H, tol)
    out.line(sp.record())
    out.info('ground', energy=f'{sp.ground_energy:.8f}',
             degeneracy=sp.ground_degeneracy)
    return _summary(out, cfg, reps)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--category', required=True,
                        help='category YAML file or bundled name (E_raw, E_normalized, Z2, trivial)')
    common.add_argument('--tol', type=float, default=None,
                        help=f'tolerance override (defaults: pentagon {PENTAGON_TOL:g}, '
                             f'unitarity and 6j {UNITARITY_TOL:g}, loop {LOOP_TOL:g}, '
                             'plaquette 1e-8)')
    common.add_argument('--out', help='write the report here instead of stdout')
    common.add_argument('--format', choices=('text', 'records'), default='text',
                        help='human text or key=value records (default: text)')
    common.add_argument('--timing', action='store_true',
                        help='include wall-clock millis in each check line')
    common.add_argument('--allow-nonunitary', action='store_true',
                        help='run on non-unitary F-data instead of refusing')

    p = argparse.ArgumentParser(prog='sixjlab', description=__doc__.splitlines()[0])
    p.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = p.add_subparsers(dest='command', required=True)
    sub.add_parser('validate', parents=[common], help='pentagon, unitarity, dimension checks')
    s = sub.add_parser('sixj', parents=[common], help='6j tables and their symmetry checks')
    s.add_argument('--require-tetrahedral', action='store_true',
                   help='count a tetrahedral failure toward the exit code')
    s = sub.add_parser('symmetrize', parents=[common],
                       help='obstruction witness and gauge search for a symmetric normalization')
    s.add_argument('--seed', type=int, default=0, help='search seed (default: 0)')
    s.add_argument('--restarts', type=int, default=20, help='search restarts (default: 20)')
    s.add_argument('--iters', type=int, default=500, help='iterations per restart (default: 500)')
    s.add_argument('--gauge-class', choices=('block', 'scalar'), default='block',
                   help='gauge family searched (default: block)')
    s = sub.add_parser('levinwen', parents=[common], help='plaquette operator certification')
    s.add_argument('--patch', required=True,
                   help='patch YAML file or fixture (hexagon[:label], two-hexagons[:label], '
                        'two-hexagons-mixed, torus)')
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**{k: v for k, v in vars(args).items()})
    except ValueError as err:
        print(f'sixjlab: {err}', file=sys.stderr)
        return EXIT_LOAD
    out = Output(cfg.format, cfg.timing)
    try:
        cat = load_category(cfg.category)
        patch = None
        if cfg.command == 'levinwen':
            from .levinwen import PatchError, load_patch
            try:
                patch = load_patch(cfg.patch)
                for name in patch.boundary.values():
                    cat.key(name)
            except (PatchError, KeyError) as err:
                raise CategoryLoadError(str(err)) from None
    except CategoryLoadError as err:
        print(f'sixjlab: load error: {err}', file=sys.stderr)
        return EXIT_LOAD
    _dims_line(out, cat)
    if cfg.command == 'levinwen':
        code = cmd_levinwen(cfg, cat, out, patch)
    else:
        code = {'validate': cmd_validate, 'sixj': cmd_sixj,
                'symmetrize': cmd_symmetrize}[cfg.command](cfg, cat, out)
    out.write(cfg.out)
    return code


if __name__ == '__main__':
    sys.exit(main())
