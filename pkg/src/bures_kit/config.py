"""Run configuration shared by the CLI and the verification suites."""

from dataclasses import asdict, dataclass, fields
import json
from pathlib import Path

from .errors import ParseError


@dataclass(frozen=True)
class RunConfig:
    hermitian_tol: float = 1e-10
    psd_tol: float = 1e-10
    trace_tol: float = 1e-10
    rank_tol: float = 1e-9
    residual_tol: float = 1e-8
    inequality_tol: float = 1e-9
    route_tol: float = 1e-8
    opt_tol: float = 1e-6
    closure_tol: float = 1e-8
    seed: int = 0
    samples: int = 200
    resolution: int = 200

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name.endswith('_tol') and not value > 0:
                raise ParseError(f'{f.name} must be positive, got {value}')
        if self.samples < 1 or self.resolution < 4:
            raise ParseError('samples must be >= 1 and resolution >= 4')

    def to_dict(self) -> dict:
        return asdict(self)

    def replace(self, **changes) -> 'RunConfig':
        data = self.to_dict()
        data.update({k: v for k, v in changes.items() if v is not None})
        return RunConfig(**data)


def load_config(path=None, **overrides) -> RunConfig:
    """Read a JSON object of ``RunConfig`` fields; unknown keys are an error."""
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f'cannot read config {path}: {exc}') from exc
        if not isinstance(data, dict):
            raise ParseError('config must be a JSON object')
        known = {f.name for f in fields(RunConfig)}
        unknown = set(data) - known
        if unknown:
            raise ParseError(f'unknown config keys: {sorted(unknown)}')
    try:
        return RunConfig(**data).replace(**overrides)
    except TypeError as exc:
        raise ParseError(str(exc)) from exc
