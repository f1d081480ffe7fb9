"""``bures-kit`` command line interface.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

import functools
import itertools
import json
import sys
import warnings

import click
import numpy as np

from .config import RunConfig, load_config
from .errors import BuresKitError
from .fidelity import (bound_power_mean, bound_trace_norm, fidelity,
                       fidelity_via_geometric_mean)
from .fileformat import read_curve, read_matrix
from .linalg import as_density
from .purification import max_overlap
from .transport import DensityCurve, transport as run_transport
from .variational import inf_sum
from .verify import POWER_MEAN_S, SUITES, run_suite

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2

METHODS = {
    'closed': lambda r1, r2: fidelity(r1, r2).fidelity,
    'gmean': lambda r1, r2: fidelity_via_geometric_mean(r1, r2).fidelity,
    'variational': lambda r1, r2: inf_sum(r1, r2).value,
    'purification': lambda r1, r2: float(np.sqrt(max(max_overlap(r1, r2).value, 0.0))),
}


class InputError(click.ClickException):
    exit_code = EXIT_INPUT


def _complex_pairs(M):
    M = np.asarray(M)
    return np.stack([M.real, M.imag], axis=-1).tolist()


def common_options(func):
    @click.option('--config', 'config_path', type=click.Path(dir_okay=False),
                  help='JSON file with RunConfig fields.')
    @click.option('--json', 'as_json', is_flag=True, help='Machine-readable output.')
    @click.option('--seed', type=int, default=None, help='Overrides the configured seed.')
    @functools.wraps(func)
    def wrapper(config_path, as_json, seed, **kwargs):
        try:
            config = load_config(config_path, seed=seed)
            with warnings.catch_warnings():
                warnings.simplefilter('ignore')
                command, inputs, results, violations = func(config=config, **kwargs)
        except BuresKitError as exc:
            raise InputError(f'{type(exc).__name__}: {exc}') from exc
        except OSError as exc:
            raise InputError(str(exc)) from exc
        _emit(command, inputs, config, results, violations, as_json)
        sys.exit(EXIT_FAILED if violations else EXIT_OK)
    return wrapper


def _emit(command, inputs, config: RunConfig, results, violations, as_json):
    if as_json:
        body = {'schema_version': SCHEMA_VERSION, 'command': command, 'inputs': inputs,
                'config': config.to_dict(), 'results': results, 'violations': violations}
        click.echo(json.dumps(body, indent=2))
        return
    click.echo(f'# {command}  ' + '  '.join(f'{k}={v}' for k, v in inputs.items()))
    click.echo('# tolerances: ' + ', '.join(f'{k}={v:g}' for k, v in config.to_dict().items()
                                           if k.endswith('_tol')))
    for key, value in results.items():
        if isinstance(value, float):
            click.echo(f'{key}: {value:.12g}')
        elif isinstance(value, (list, dict)) and len(json.dumps(value)) > 200:
            click.echo(f'{key}: {json.dumps(value)[:200]}...')
        else:
            click.echo(f'{key}: {value}')
    for v in violations:
        click.echo(f'VIOLATION: {v}')


def _read_state(path, config):
    mf = read_matrix(path)
    if mf.kind not in ('density', 'positive'):
        raise InputError(f'{path}: expected kind density or positive, got {mf.kind}')
    return as_density(mf.data, normalized=mf.kind == 'density', trace_tol=config.trace_tol,
                      psd_tol=config.psd_tol)


@click.group()
def main():
    """Fidelity, Bures geometry and parallel transport for density operators."""


@main.command('fidelity')
@click.argument('file1', type=click.Path(exists=True, dir_okay=False))
@click.argument('file2', type=click.Path(exists=True, dir_okay=False))
@click.option('--method', type=click.Choice(sorted(METHODS)), default='closed')
@click.option('--all', 'all_methods', is_flag=True, help='Run every method and report deltas.')
@common_options
def cmd_fidelity(file1, file2, method, all_methods, config):
    """Fidelity and transition probability of two states."""
    r1, r2 = _read_state(file1, config), _read_state(file2, config)
    if r1.shape != r2.shape:
        raise InputError(f'dimension mismatch: {r1.shape} vs {r2.shape}')
    inputs = {'file1': str(file1), 'file2': str(file2)}
    chosen = sorted(METHODS) if all_methods else [method]
    values = {m: float(METHODS[m](r1, r2)) for m in chosen}
    primary = 'closed' if all_methods else method
    results = {'fidelity': values[primary],
               'transition_probability': values[primary] ** 2,
               'method': 'all' if all_methods else method,
               'by_method': values}
    violations = []
    if all_methods:
        deltas = {f'{a}-{b}': abs(values[a] - values[b])
                  for a, b in itertools.combinations(sorted(values), 2)}
        results['deltas'] = deltas
        violations = [{'pair': k, 'delta': v, 'tol': config.opt_tol}
                      for k, v in deltas.items() if v > config.opt_tol]
    return 'fidelity', inputs, results, violations


@main.command('bounds')
@click.argument('file1', type=click.Path(exists=True, dir_okay=False))
@click.argument('file2', type=click.Path(exists=True, dir_okay=False))
@click.option('-s', 's_values', type=float, multiple=True,
              help='Exponents for the power-mean bound (default 0.1..0.9).')
@common_options
def cmd_bounds(file1, file2, s_values, config):
    """Power-mean and trace-norm upper bounds on the transition probability."""
    r1, r2 = _read_state(file1, config), _read_state(file2, config)
    tol = config.inequality_tol
    results = {'power_mean': [], 'trace_norm': None}
    violations = []
    for s in s_values or POWER_MEAN_S:
        b = bound_power_mean(r1, r2, float(s), tol)
        entry = {'s': float(s), 'lhs': b.lhs, 'rhs': b.rhs, 'slack': b.lhs - b.rhs,
                 'holds': b.holds}
        results['power_mean'].append(entry)
        if not b.holds:
            violations.append({'bound': 'power_mean', **entry})
    b = bound_trace_norm(r1, r2, tol)
    entry = {'lhs': b.lhs, 'rhs': b.rhs, 'slack': b.rhs - b.lhs, 'holds': b.holds}
    results['trace_norm'] = entry
    if not b.holds:
        violations.append({'bound': 'trace_norm', **entry})
    return 'bounds', {'file1': str(file1), 'file2': str(file2)}, results, violations


@main.command('transport')
@click.argument('curve_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--holonomy', is_flag=True, help='Require a closed curve and report its holonomy.')
@click.option('--scheme', type=click.Choice(['midpoint', 'left']), default='midpoint')
@click.option('--emit-lift', type=click.Path(dir_okay=False), help='Write the lifted amplitudes as JSON.')
@common_options
def cmd_transport(curve_file, holonomy, scheme, emit_lift, config):
    """Parallel transport, Bures length and holonomy along a sampled curve."""
    cf = read_curve(curve_file)
    curve = DensityCurve(cf.grid, np.stack([b.data for b in cf.blocks]))
    res = run_transport(curve, scheme=scheme, holonomy=True if holonomy else None,
                        closure_tol=config.closure_tol, rank_tol=config.rank_tol,
                        residual_tol=config.residual_tol)
    results = {
        'bures_length': res.bures_length,
        'closed': res.holonomy is not None,
        'phase': res.phase,
        'unitarity_defect': res.unitarity_defect,
        'holonomy': None if res.holonomy is None else _complex_pairs(res.holonomy),
        'amplitude_defect': res.amplitude_defect,
        'parallelity_defect': res.parallelity_defect if res.parallelity_defects.size else None,
        'lyapunov_residuals': res.lyapunov_residuals.tolist(),
        'step_defects': res.step_defects.tolist(),
    }
    results['singular_support_steps'] = [
        int(k) for k, r in enumerate(res.lyapunov_residuals) if r > config.residual_tol]
    if emit_lift:
        with open(emit_lift, 'w') as fh:
            json.dump({'schema_version': SCHEMA_VERSION, 'grid': cf.grid.tolist(),
                       'amplitudes': _complex_pairs(res.amplitudes)}, fh)
    inputs = {'curve_file': str(curve_file), 'points': int(cf.grid.size), 'scheme': scheme,
              **{f'meta.{k}': v for k, v in cf.metadata.items()}}
    return 'transport', inputs, results, []


@main.command('verify')
@click.argument('suite', type=click.Choice(SUITES + ('all',)))
@click.option('--samples', type=int, default=None)
@click.option('--dim', 'dims', type=int, multiple=True)
@click.option('--functional', 'functionals', multiple=True,
              help='Functional for the functor suite (repeatable).')
@common_options
def cmd_verify(suite, samples, dims, functionals, config):
    """Run a seeded randomized verification suite."""
    reports = run_suite(suite, config, samples, dims or None, functionals or None)
    results = {'suites': [r.to_dict() for r in reports],
               'checks': sum(r.checks for r in reports),
               'failures': sum(r.failures for r in reports),
               'worst_slack': min(r.worst_slack for r in reports)}
    violations = [{'suite': r.name, **v} for r in reports for v in r.violations]
    inputs = {'suite': suite, 'samples': samples or config.samples,
              'dims': list(dims) or 'default'}
    if functionals:
        inputs['functionals'] = list(functionals)
    return 'verify', inputs, results, violations


if __name__ == '__main__':
    main()
