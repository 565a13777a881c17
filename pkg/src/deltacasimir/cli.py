"""Command-line front end.

    deltacasimir <subcommand> [--lambda X] [--kappa X] [--eps X] [--xi X] [--u X]
                 [--grid name=start:stop:count[:log]] [--config FILE]
                 [--out FILE] [--format csv|json] [--rel-tol X]

Every subcommand writes one record per grid point. CSV columns are fixed per
subcommand (see ``COLUMNS``) and always end with ``value, error_estimate,
status``. Exit status is 0 on success, 1 if any record failed numerically and
2 for usage or configuration errors.

A config file is a JSON object with the same keys as the long flags
(``lambda``, ``kappa``, ``eps``, ``xi``, ``u``, ``rel_tol``, ``format``,
``out``, ``representation``) plus ``grids``, mapping grid names to either a
list of numbers or a ``start:stop:count[:log]`` string. Flags override the
file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .boundary import DEFAULT_FIT_GRID, BoundaryParams, anomaly_report, b_sphere
from .bulk import bulk_record, delta_e_renormalized, renormalization_pipeline
from .errors import DomainError
from .heat_kernel import ModelParams, RadialGeometry, diagonal_relative, free_kernel, kernel
from .quadrature import QuadratureSpec

SUBCOMMANDS = ("kernel", "bulk", "renorm", "boundary", "anomaly", "sweep", "verify")
GRID_NAMES = ("u_grid", "r_grid", "eps_grid", "lambda_grid", "kappa_grid", "t_grid")

COLUMNS = {
    "kernel": ("r", "t", "lambda", "kappa", "eps", "free_kernel", "relative", "value", "error_estimate", "status"),
    "bulk": ("u", "lambda", "kappa", "eps", "representation", "value", "error_estimate", "status"),
    "renorm": ("lambda", "kappa", "numeric", "difference", "pipeline", "value", "error_estimate", "status"),
    "boundary": ("r", "u", "lambda", "kappa", "eps", "b_out", "r_times_b_in", "value", "error_estimate", "status"),
    "anomaly": ("xi", "u", "lambda", "kappa", "eps", "prefactor", "inner_limit", "fitted_c", "fitted_offset",
                "fit_residual", "anomaly_detected", "narrative", "value", "error_estimate", "status"),
    "sweep": ("lambda", "kappa", "numeric", "value", "error_estimate", "status"),
    "verify": ("criterion", "title", "detail", "value", "error_estimate", "status"),
}


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    model: ModelParams
    xi: float = 0.0
    u: float = 1.0
    grids: dict[str, list[float]] = field(default_factory=dict)
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    output_path: str | None = None
    output_format: str = "csv"
    representation: str = "continued"
    pipeline: bool = False
    curve_dir: str | None = None
    jobs: int = 1

    @property
    def boundary(self) -> BoundaryParams | None:
        """Boundary parameters, for the subcommands that use them."""
        if self.subcommand not in ("boundary", "anomaly"):
            return None
        return BoundaryParams(self.xi, self.model, self.u)

    def grid(self, name: str, default) -> list[float]:
        values = self.grids.get(name)
        return list(values) if values else list(default)

    def echo(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "lambda": self.model.lam,
            "kappa": self.model.kappa,
            "eps": self.model.eps,
            "xi": self.xi,
            "u": self.u,
            "rel_tol": self.quad.rel_tol,
            "representation": self.representation,
            "pipeline": self.pipeline,
            "grids": {k: self.grids[k] for k in sorted(self.grids)},
        }


def parse_grid(text: str) -> tuple[str, list[float]]:
    """Parse ``name=start:stop:count[:log]`` or ``name=v1,v2,...``."""
    if "=" not in text:
        raise ConfigError(f"grid {text!r} must look like name=start:stop:count[:log]")
    name, spec = text.split("=", 1)
    name = name.strip()
    if not name.endswith("_grid"):
        name += "_grid"
    if name not in GRID_NAMES:
        raise ConfigError(f"unknown grid {name!r}; expected one of {', '.join(GRID_NAMES)}")
    return name, _grid_values(spec)


def _grid_values(spec) -> list[float]:
    if isinstance(spec, (list, tuple)):
        return [float(v) for v in spec]
    spec = str(spec).strip()
    try:
        if ":" not in spec:
            return [float(v) for v in spec.split(",") if v.strip()]
        parts = spec.split(":")
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
            raise ConfigError(f"bad grid range {spec!r}")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad grid {spec!r}: {exc}") from None
    if count < 1:
        raise ConfigError("grid count must be >= 1")
    if len(parts) == 4:
        if start <= 0 or stop <= 0:
            raise ConfigError("log grids need positive bounds")
        return [float(v) for v in np.geomspace(start, stop, count)]
    return [float(v) for v in np.linspace(start, stop, count)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deltacasimir", description="Casimir energy of a point interaction")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--lambda", dest="lam", type=float)
        p.add_argument("--kappa", type=float)
        p.add_argument("--eps", type=float)
        p.add_argument("--xi", type=float)
        p.add_argument("--u", type=float)
        p.add_argument("--grid", action="append", default=[], metavar="NAME=START:STOP:COUNT[:log]")
        p.add_argument("--config", metavar="FILE")
        p.add_argument("--out", metavar="FILE")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--rel-tol", dest="rel_tol", type=float)
        p.add_argument("--jobs", type=int, default=1)
        if name == "bulk":
            p.add_argument("--representation", choices=("continued", "defining", "renormalized"))
        if name == "renorm":
            p.add_argument("--pipeline", action="store_true",
                           help="also run the regular-part / eps -> 0 pipeline over eps_grid")
        if name == "sweep":
            p.add_argument("--curve-dir", metavar="DIR")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")

    def pick(key, flag_value, default):
        return flag_value if flag_value is not None else data.get(key, default)

    grids = {}
    for name, spec in (data.get("grids") or {}).items():
        key = name if name.endswith("_grid") else name + "_grid"
        if key not in GRID_NAMES:
            raise ConfigError(f"unknown grid {name!r} in config")
        grids[key] = _grid_values(spec)
    for text in args.grid:
        name, values = parse_grid(text)
        grids[name] = values

    try:
        model = ModelParams(float(pick("lambda", args.lam, 1.0)), float(pick("kappa", args.kappa, 1.0)),
                            float(pick("eps", args.eps, 0.0)))
        quad = QuadratureSpec(rel_tol=float(pick("rel_tol", args.rel_tol, 1e-10)))
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    cfg = RunConfig(
        subcommand=args.subcommand,
        model=model,
        xi=float(pick("xi", args.xi, 0.0)),
        u=float(pick("u", args.u, 1.0)),
        grids=grids,
        quad=quad,
        output_path=pick("out", args.out, None),
        output_format=pick("format", args.format, "csv"),
        representation=pick("representation", getattr(args, "representation", None), "continued"),
        pipeline=bool(getattr(args, "pipeline", False) or data.get("pipeline", False)),
        curve_dir=pick("curve_dir", getattr(args, "curve_dir", None), None),
        jobs=max(1, int(args.jobs)),
    )
    if cfg.output_format not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    if cfg.representation not in ("continued", "defining", "renormalized"):
        raise ConfigError(f"unknown representation {cfg.representation!r}")
    for name, values in cfg.grids.items():
        if not values:
            raise ConfigError(f"grid {name} is empty")
    return cfg


# --- per-record work; top-level so process pools can pickle it ---------------

def _kernel_row(r, t, p: ModelParams):
    geom = RadialGeometry.diagonal(r)
    rel = diagonal_relative(r, t, p) if p.lam > 0 else 0.0
    return {"free_kernel": free_kernel(geom, t, p), "relative": rel,
            "value": kernel(geom, t, p), "error_estimate": 0.0}


def _bulk_row(u, p: ModelParams, representation, quad):
    rec = bulk_record(u, p, representation, quad)
    return {"value": rec.value, "error_estimate": rec.error_estimate}


def _renorm_row(p: ModelParams, pipeline_eps):
    r = delta_e_renormalized(p)
    row = {"numeric": r.numeric, "difference": r.difference, "pipeline": None,
           "value": r.value, "error_estimate": max(abs(r.difference), r.numeric_error)}
    if pipeline_eps:
        res = renormalization_pipeline(p, pipeline_eps)
        row["pipeline"] = res.value
        if not res.converged:
            raise ArithmeticError("eps -> 0 extrapolation did not converge")
    return row


def _boundary_row(r, bp: BoundaryParams):
    b_in = b_sphere(r, "in", bp)
    return {"b_out": b_sphere(r, "out", bp), "r_times_b_in": r * b_in, "value": b_in, "error_estimate": 0.0}


def _anomaly_row(bp: BoundaryParams, grid):
    rep = anomaly_report(bp, grid)
    if not rep.converged:
        raise ArithmeticError("C/r fit failed")
    return {"prefactor": rep.prefactor, "inner_limit": rep.small_r_limit_L, "fitted_c": rep.fitted_coefficient,
            "fitted_offset": rep.fitted_offset, "fit_residual": rep.fit_residual,
            "anomaly_detected": rep.anomaly_detected, "narrative": rep.narrative,
            "value": rep.boundary_coefficient,
            "error_estimate": abs(rep.prefactor) * abs(rep.fitted_coefficient - rep.small_r_limit_L)}


def _sweep_row(p: ModelParams):
    r = delta_e_renormalized(p)
    return {"numeric": r.numeric, "value": r.value, "error_estimate": max(abs(r.difference), r.numeric_error)}


def _call(task):
    fn, args = task
    try:
        row = fn(*args)
        row["status"] = "ok"
    except (ArithmeticError, ValueError) as exc:
        row = {"value": math.nan, "error_estimate": math.nan, "status": f"error: {exc}"}
    return row


def _tasks(cfg: RunConfig) -> list[tuple[dict, tuple]]:
    """(fixed columns, (function, args)) per record, in grid order."""
    p = cfg.model
    out = []
    if cfg.subcommand == "kernel":
        for r in cfg.grid("r_grid", [1.0]):
            for t in cfg.grid("t_grid", [1.0]):
                out.append(({"r": r, "t": t, "lambda": p.lam, "kappa": p.kappa, "eps": p.eps},
                            (_kernel_row, (r, t, p))))
    elif cfg.subcommand == "bulk":
        for lam in cfg.grid("lambda_grid", [p.lam]):
            for eps in cfg.grid("eps_grid", [p.eps]):
                for u in cfg.grid("u_grid", [cfg.u]):
                    q = p.with_(lam=lam, eps=eps)
                    out.append(({"u": u, "lambda": lam, "kappa": p.kappa, "eps": eps,
                                 "representation": cfg.representation},
                                (_bulk_row, (u, q, cfg.representation, cfg.quad))))
    elif cfg.subcommand in ("renorm", "sweep"):
        eps_seq = tuple(cfg.grid("eps_grid", (0.1, 0.05, 0.025))) if cfg.pipeline else ()
        for kappa in cfg.grid("kappa_grid", [p.kappa]):
            for lam in cfg.grid("lambda_grid", [p.lam]):
                q = p.with_(lam=lam, kappa=kappa, eps=0.0)
                if cfg.subcommand == "renorm":
                    out.append(({"lambda": lam, "kappa": kappa}, (_renorm_row, (q, eps_seq))))
                else:
                    out.append(({"lambda": lam, "kappa": kappa}, (_sweep_row, (q,))))
    elif cfg.subcommand == "boundary":
        bp = cfg.boundary
        for r in cfg.grid("r_grid", [1.0]):
            out.append(({"r": r, "u": cfg.u, "lambda": p.lam, "kappa": p.kappa, "eps": p.eps},
                        (_boundary_row, (r, bp))))
    elif cfg.subcommand == "anomaly":
        fit = tuple(cfg.grid("r_grid", DEFAULT_FIT_GRID))
        for lam in cfg.grid("lambda_grid", [p.lam]):
            bp = BoundaryParams(cfg.xi, p.with_(lam=lam), cfg.u)
            out.append(({"xi": cfg.xi, "u": cfg.u, "lambda": lam, "kappa": p.kappa, "eps": p.eps},
                        (_anomaly_row, (bp, fit))))
    return out


def compute_records(cfg: RunConfig) -> list[dict]:
    if cfg.subcommand == "verify":
        from .verify import run_all

        records = []
        for res in run_all():
            print(res.line(), file=sys.stderr)
            records.append({"criterion": res.number, "title": res.title, "detail": res.detail,
                            "value": res.worst, "error_estimate": res.tolerance,
                            "status": "pass" if res.passed else "fail"})
        return records

    try:
        tasks = _tasks(cfg)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    work = [task for _, task in tasks]
    if cfg.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_call, work))  # map keeps grid order
    else:
        rows = [_call(task) for task in work]
    columns = COLUMNS[cfg.subcommand]
    records = []
    for (fixed, _), row in zip(tasks, rows):
        merged = {**fixed, **row}
        records.append({c: merged.get(c) for c in columns})
    return records


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render_csv(cfg: RunConfig, records: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(f"# deltacasimir {cfg.subcommand}\r\n")
    buf.write(f"# config: {json.dumps(cfg.echo(), sort_keys=True)}\r\n")
    writer = csv.writer(buf)
    columns = COLUMNS[cfg.subcommand]
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_fmt(rec.get(c)) for c in columns])
    return buf.getvalue()


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render_json(cfg: RunConfig, records: list[dict]) -> str:
    payload = {"config": cfg.echo(),
               "records": [{k: _json_safe(v) for k, v in rec.items()} for rec in records]}
    return json.dumps(payload, indent=2) + "\n"


def write_curves(cfg: RunConfig, records: list[dict]) -> list[Path]:
    """Two-column ``lambda value`` files, one per kappa."""
    directory = Path(cfg.curve_dir or (Path(cfg.output_path).parent if cfg.output_path else "."))
    directory.mkdir(parents=True, exist_ok=True)
    kappas = []
    for rec in records:
        if rec["kappa"] not in kappas:
            kappas.append(rec["kappa"])
    paths = []
    for i, kappa in enumerate(kappas):
        path = directory / f"renorm_vs_lambda_{i}.dat"
        lines = [f"# renormalized bulk energy vs lambda at kappa = {_fmt(kappa)}", "# lambda value"]
        lines += [f"{_fmt(rec['lambda'])} {_fmt(rec['value'])}" for rec in records
                  if rec["kappa"] == kappa and rec["status"] == "ok"]
        path.write_text("\n".join(lines) + "\n")
        paths.append(path)
    return paths


def run(cfg: RunConfig) -> int:
    records = compute_records(cfg)
    text = render_json(cfg, records) if cfg.output_format == "json" else render_csv(cfg, records)
    if cfg.output_path:
        # newline="" keeps the CRLF record separators byte-exact
        with open(cfg.output_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.subcommand == "sweep":
        write_curves(cfg, records)
    ok = {"ok", "pass"}
    return 0 if all(rec["status"] in ok for rec in records) else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return run(cfg)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"deltacasimir: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
