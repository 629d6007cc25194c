"""Declarative experiment runner.

Subcommands:

  qfi             table of QFI and Cramer-Rao bound over (estimand x time)
  sweep           table over the estimand (or the Rabi anisotropy ratio)
  brachistochrone coefficient-space cycloid samples over (estimand x time)
  verify          run the invariant and cross-oracle suites

A run is described by a single JSON config document; every flag and any
``--set key=value`` dotted path overrides the file.  Tables are emitted as
CSV (comment header recording the full resolved config) or JSON, with
floats at 17 significant digits; ``--plot`` additionally renders a figure
of the emitted table.  Frequencies are in units of the mode frequency
(set omega = 1), so times are omega*t.

Exit codes: 0 success, 1 config error, 2 numerical non-convergence,
3 verify-suite failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib.metadata import PackageNotFoundError, version as _pkg_version

import numpy as np

from . import fock, models, oracle, qfi, verify
from .algebra import casimir_radicand

__all__ = ["main", "entry", "ConfigError"]

try:
    VERSION = _pkg_version("critsense")
except PackageNotFoundError:  # running from a source tree
    VERSION = "0.1.0"


class ConfigError(Exception):
    """Invalid run configuration; message names the offending field."""


# ----------------------------------------------------------------- config --

_MODEL_DEFAULTS = {
    "qrm": {"omega": 1.0, "zeta": 1.0},
    "lmg": {"gamma": 0.0},
    "apt": {"delta": 1.0, "kappa": 0.0, "estimand": "kappa"},
    "rabi-full": {"omega": 1.0, "zeta": 1.0, "Omega": 50.0},
}

_DEFAULT_CONFIG = {
    "model": "qrm",
    "params": {},
    "estimand": None,
    "time": None,
    "probe": None,
    "cutoff": {"policy": "adaptive", "n": 32},
    "compat_mode": False,
    "with_oracle": False,
    "nu": 1,
    "sweep": {"over": "estimand"},
    "oracle": {},
    "verify": {},
    "seed": 20240801,
    "jobs": 1,
    "format": "csv",
    "out": None,
    "plot": None,
}


def _parse_set_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _apply_set(config: dict, assignment: str) -> None:
    if "=" not in assignment:
        raise ConfigError(f"--set expects key=value, got {assignment!r}")
    path, raw = assignment.split("=", 1)
    keys = path.strip().split(".")
    node = config
    for key in keys[:-1]:
        if not isinstance(node.get(key), dict):
            node[key] = {}
        node = node[key]
    node[keys[-1]] = _parse_set_value(raw)


def load_config(args: argparse.Namespace) -> dict:
    """Merge defaults, config file, --set assignments and flags."""
    config = json.loads(json.dumps(_DEFAULT_CONFIG))  # deep copy
    if args.config:
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise ConfigError("config file must hold a JSON object")
        for key, value in file_cfg.items():
            if key not in config:
                raise ConfigError(f"unknown config key {key!r}")
            if isinstance(config.get(key), dict) and isinstance(value, dict):
                config[key].update(value)
            else:
                config[key] = value
    for assignment in args.set or []:
        _apply_set(config, assignment)
    if args.model:
        config["model"] = args.model
    if args.with_oracle:
        config["with_oracle"] = True
    if args.compat_paper_case_iii:
        config["compat_mode"] = True
    if args.nu is not None:
        config["nu"] = args.nu
    if args.format:
        config["format"] = args.format
    if args.out:
        config["out"] = args.out
    if args.plot:
        config["plot"] = args.plot
    if args.seed is not None:
        config["seed"] = args.seed
    if args.jobs is not None:
        config["jobs"] = args.jobs

    model = config["model"]
    if model not in _MODEL_DEFAULTS:
        raise ConfigError(f"unknown model {model!r} (expected qrm|lmg|apt|rabi-full)")
    params = dict(_MODEL_DEFAULTS[model])
    params.update(config["params"] or {})
    config["params"] = params
    if config["nu"] is None or int(config["nu"]) < 1:
        raise ConfigError(f"nu must be >= 1, got {config['nu']}")
    config["nu"] = int(config["nu"])
    config["jobs"] = max(1, int(config["jobs"]))
    if config["format"] not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {config['format']!r}")
    return config


def _build_model(config: dict):
    name = config["model"]
    p = config["params"]
    try:
        if name in ("qrm", "rabi-full"):
            qp = models.QrmParameters(
                omega=float(p["omega"]),
                zeta=float(p["zeta"]),
                gtilde=float(p.get("gtilde", 0.0)),
                Omega=float(p["Omega"]) if p.get("Omega") is not None else None,
            )
            return models.qrm_effective(qp), qp
        if name == "lmg":
            lp = models.LmgParameters(gamma=float(p["gamma"]), eta=float(p.get("eta", 0.0)))
            return models.lmg(lp), lp
        ap = models.AptParameters(
            delta=float(p.get("delta", 0.0)),
            kappa=float(p.get("kappa", 0.0)),
            estimand=p.get("estimand", "kappa"),
        )
        return models.apt(ap), ap
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid params for model {name!r}: {exc}") from exc


def _default_estimand(config: dict):
    p = config["params"]
    key = {"qrm": "gtilde", "rabi-full": "gtilde", "lmg": "eta"}.get(config["model"])
    if key is None:
        key = p.get("estimand", "kappa")
    return p.get(key)


def resolve_grid(node, field: str, critical: float | None = None) -> np.ndarray:
    """Expand a grid description into a float array.

    Accepted forms: scalar, {"value": x}, {"values": [...]}, and
    {"start", "stop", "count", "spacing": linear|log|approach-critical}.
    Grids must be non-empty and strictly monotone.
    """
    if node is None:
        raise ConfigError(f"{field}: missing value or grid")
    if isinstance(node, (int, float)):
        return np.array([float(node)])
    if not isinstance(node, dict):
        raise ConfigError(f"{field}: expected number or object, got {node!r}")
    if "value" in node:
        return np.array([float(node["value"])])
    if "values" in node:
        values = np.asarray(node["values"], dtype=float)
        if values.size == 0:
            raise ConfigError(f"{field}: values list is empty")
        if values.size > 1 and not (
            np.all(np.diff(values) > 0) or np.all(np.diff(values) < 0)
        ):
            raise ConfigError(f"{field}: values must be strictly monotone")
        return values
    try:
        start, stop = float(node["start"]), float(node["stop"])
        count = int(node.get("count", 1))
        spacing = node.get("spacing", "linear")
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{field}: malformed grid spec {node!r}") from exc
    if count < 1:
        raise ConfigError(f"{field}: count must be >= 1")
    if count == 1:
        return np.array([start])
    if spacing == "linear":
        return np.linspace(start, stop, count)
    if spacing == "log":
        if start <= 0 or stop <= 0:
            raise ConfigError(f"{field}: log spacing needs positive endpoints")
        return np.geomspace(start, stop, count)
    if spacing == "approach-critical":
        if critical is None:
            raise ConfigError(f"{field}: approach-critical spacing needs a critical point")
        d0, d1 = critical - start, critical - stop
        if d0 * d1 <= 0:
            raise ConfigError(
                f"{field}: approach-critical endpoints must sit on one side of {critical}"
            )
        return critical - np.geomspace(d0, d1, count)
    raise ConfigError(f"{field}: unknown spacing {spacing!r}")


def _probe_spec(config: dict, representation: str):
    node = config.get("probe")
    if node is None:
        return "canonical" if representation == "one-mode" else "vacuum"
    if isinstance(node, str):
        return node
    if isinstance(node, dict) and "fock" in node:
        weights = {}
        for entry in node["fock"]:
            try:
                occ, re_part, im_part = entry
            except (TypeError, ValueError) as exc:
                raise ConfigError(
                    "probe.fock entries must be [occ, re, im] triples"
                ) from exc
            key = tuple(int(v) for v in occ) if isinstance(occ, (list, tuple)) else int(occ)
            weights[key] = complex(float(re_part), float(im_part))
        return {"fock": weights}
    if isinstance(node, dict) and "coherent" in node:
        alpha = node["coherent"]
        if isinstance(alpha, (list, tuple)):
            alpha = complex(float(alpha[0]), float(alpha[1]))
        return {"coherent": complex(alpha)}
    raise ConfigError(f"probe: unknown spec {node!r}")


def _oracle_config(config: dict) -> oracle.OracleConfig:
    node = config.get("oracle") or {}
    try:
        return oracle.OracleConfig(
            fd_step=node.get("fd_step"),
            richardson=bool(node.get("richardson", True)),
            trunc_start=int(node.get("trunc_start", 32)),
            trunc_tol=float(node.get("trunc_tol", 1e-7)),
            trunc_max=node.get("trunc_max"),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"oracle: {exc}") from exc


# ------------------------------------------------------------------ tables --


def _closed_form_at(model, lam, t, probe_spec, config, cfg):
    """Closed-form report plus the cutoff it was evaluated at."""
    cutoff_cfg = config.get("cutoff") or {}
    policy = cutoff_cfg.get("policy", "adaptive")
    compat = bool(config["compat_mode"])
    if policy == "fixed":
        n = int(cutoff_cfg.get("n", 32))
        rep = models.build_representation(model, n)
        probe = fock.build_state(probe_spec, rep)
        return qfi.qfi_closed_form(model, lam, t, probe, rep, compat=compat), n
    if policy != "adaptive":
        raise ConfigError(f"cutoff.policy must be fixed or adaptive, got {policy!r}")

    def total_at(n: int) -> float:
        rep = models.build_representation(model, n)
        probe = fock.build_state(probe_spec, rep)
        return qfi.qfi_closed_form(model, lam, t, probe, rep, compat=compat).total

    ladder_cfg = oracle.OracleConfig(trunc_start=12, trunc_tol=cfg.trunc_tol)
    mode_count = 1 if model.representation == "one-mode" else 2
    _, n_used = oracle.converge_truncation(
        total_at, ladder_cfg, max_cutoff=cfg.max_cutoff(mode_count)
    )
    rep = models.build_representation(model, n_used)
    probe = fock.build_state(probe_spec, rep)
    return qfi.qfi_closed_form(model, lam, t, probe, rep, compat=compat), n_used


def _qfi_columns(config: dict) -> list[str]:
    if config["model"] == "rabi-full":
        return ["lambda", "t", "F_total", "crb", "N_used"]
    cols = [
        "lambda", "t", "F_total",
        "F_zz", "F_yz", "F_xz", "F_yy", "F_xy", "F_xx",
        "crb", "regime", "s", "N_used",
    ]
    if config["with_oracle"]:
        cols += ["F_oracle", "N_oracle"]
    return cols


def _run_qfi(config: dict) -> tuple[list[str], list[list]]:
    model, params = _build_model(config)
    cfg = _oracle_config(config)
    nu = config["nu"]

    estimand_node = config["estimand"]
    if estimand_node is None:
        estimand_node = _default_estimand(config)
    lam_grid = resolve_grid(estimand_node, "estimand", critical=model.critical_values[0])
    t_grid = resolve_grid(config["time"], "time")
    if np.any(t_grid < 0):
        raise ConfigError("time: values must be >= 0")

    if config["model"] == "rabi-full":
        if params.Omega is None:
            raise ConfigError("rabi-full requires params.Omega")
        probe_spec = _probe_spec(config, "one-mode")

        def full_row(point):
            lam, t = point
            scale = math.sqrt(params.Omega * params.omega) / 2.0

            def at_cutoff(n: int) -> float:
                rep = fock.one_mode_K(n)
                probe = models.lift_to_spin_down(fock.build_state(probe_spec, rep))
                return oracle.finite_difference_qfi_matrix(
                    lambda x: models.full_rabi_hamiltonian(params, x * scale, n),
                    lam, t, probe, cfg,
                )

            value, n_used = oracle.converge_truncation(
                at_cutoff, cfg, max_cutoff=cfg.max_cutoff(1)
            )
            bound = qfi.crb(value, nu) if value > 0 else None
            return [lam, t, value, bound, n_used]

        points = [(lam, t) for lam in lam_grid for t in t_grid]
        rows = _parallel_map(full_row, points, config["jobs"])
        return _qfi_columns(config), rows

    probe_spec = _probe_spec(config, model.representation)

    def row(point):
        lam, t = point
        report, n_used = _closed_form_at(model, lam, t, probe_spec, config, cfg)
        bound = qfi.crb(report.total, nu) if report.total > 0 else None
        out = [lam, t, report.total]
        out += [report.parts[k] for k in qfi.PART_KEYS]
        out += [bound, report.regime.regime.value, report.regime.radicand, n_used]
        if config["with_oracle"]:
            value, n_oracle = oracle.converged_oracle_qfi(model, lam, t, probe_spec, cfg)
            out += [value, n_oracle]
        return out

    points = [(lam, t) for lam in lam_grid for t in t_grid]
    rows = _parallel_map(row, points, config["jobs"])
    return _qfi_columns(config), rows


def _run_sweep(config: dict) -> tuple[list[str], list[list]]:
    over = (config.get("sweep") or {}).get("over", "estimand")
    if over not in ("estimand", "zeta"):
        raise ConfigError(f"sweep.over must be estimand or zeta, got {over!r}")
    cfg = _oracle_config(config)
    nu = config["nu"]
    t_grid = resolve_grid(config["time"], "time")
    if t_grid.size != 1:
        raise ConfigError("sweep: time must be a single value")
    t = float(t_grid[0])
    is_qrm = config["model"] == "qrm"

    if over == "zeta":
        if not is_qrm:
            raise ConfigError("sweep.over = zeta is only defined for the qrm model")
        zeta_grid = resolve_grid(config["estimand"], "estimand (zeta grid)")
        columns = ["zeta", "t", "F_total", "crb", "regime", "s", "A_factor", "N_used"]

        def zrow(zeta):
            params = dict(config["params"])
            params["zeta"] = float(zeta)
            sub = dict(config)
            sub["params"] = params
            model, p = _build_model(sub)
            lam = p.gtilde if p.gtilde > 0 else 0.9 * p.critical_coupling
            probe_spec = _probe_spec(config, model.representation)
            report, n_used = _closed_form_at(model, lam, t, probe_spec, sub, cfg)
            bound = qfi.crb(report.total, nu) if report.total > 0 else None
            factor = qfi.qrm_asymptotic_factor(float(zeta), float(params["omega"]))
            return [
                float(zeta), t, report.total, bound,
                report.regime.regime.value, report.regime.radicand, factor, n_used,
            ]

        rows = _parallel_map(zrow, list(zeta_grid), config["jobs"])
        return columns, rows

    model, params = _build_model(config)
    estimand_node = config["estimand"]
    if estimand_node is None:
        estimand_node = _default_estimand(config)
    lam_grid = resolve_grid(estimand_node, "estimand", critical=model.critical_values[0])
    probe_spec = _probe_spec(config, model.representation)
    columns = ["lambda", "t", "F_total", "crb", "regime", "s", "N_used"]
    if is_qrm:
        columns.insert(6, "A_factor")
    if config["with_oracle"]:
        columns += ["F_oracle", "N_oracle"]

    def lrow(lam):
        report, n_used = _closed_form_at(model, lam, t, probe_spec, config, cfg)
        bound = qfi.crb(report.total, nu) if report.total > 0 else None
        out = [lam, t, report.total, bound, report.regime.regime.value, report.regime.radicand]
        if is_qrm:
            out.append(qfi.qrm_asymptotic_factor(params.zeta, params.omega))
        out.append(n_used)
        if config["with_oracle"]:
            value, n_oracle = oracle.converged_oracle_qfi(model, lam, t, probe_spec, cfg)
            out += [value, n_oracle]
        return out

    rows = _parallel_map(lrow, list(lam_grid), config["jobs"])
    return columns, rows


def _run_brachistochrone(config: dict) -> tuple[list[str], list[list]]:
    from .generator import cycloid_curve

    model, _ = _build_model(config)
    estimand_node = config["estimand"]
    if estimand_node is None:
        estimand_node = _default_estimand(config)
    lam_grid = resolve_grid(estimand_node, "estimand", critical=model.critical_values[0])
    t_grid = resolve_grid(config["time"], "time")
    columns = ["lambda", "s", "t", "x", "y", "z"]
    rows: list[list] = []
    for lam in lam_grid:
        s = casimir_radicand(model.r(lam))
        if s == 0.0:
            raise ConfigError(
                f"estimand {lam} sits exactly at the critical point; the cycloid degenerates"
            )
        curve = cycloid_curve(s, t_grid)
        for t, (x, y, z) in zip(t_grid, curve):
            rows.append([float(lam), s, float(t), float(x), float(y), float(z)])
    return columns, rows


def _run_verify(config: dict) -> tuple[list[verify.CheckResult], bool]:
    node = config.get("verify") or {}
    results = verify.run_suite(
        seed=int(config["seed"]),
        cases=int(node.get("cases", 1000)),
        oracle_points=int(node.get("oracle_points", 2)),
        include_oracle=bool(node.get("include_oracle", True)),
        include_sw=bool(node.get("include_sw", True)),
    )
    return results, all(r.passed for r in results)


def _parallel_map(fn, items, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ------------------------------------------------------------------ output --


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if v == 0.0:
            v = 0.0  # normalize negative zero
        return f"{v:.17g}"
    return str(value)


#: delivery knobs that do not affect the computed rows; left out of the
#: recorded config so identical runs emit byte-identical tables
_VOLATILE_KEYS = ("out", "plot", "jobs", "format")


def _recorded_config(config: dict) -> dict:
    return {
        k: v for k, v in config.items() if v is not None and k not in _VOLATILE_KEYS
    }


def _config_for_header(config: dict) -> str:
    return json.dumps(_recorded_config(config), sort_keys=True, separators=(",", ":"))


def _emit_table(command: str, config: dict, columns: list[str], rows: list[list], notes=()):
    if config["format"] == "csv":
        lines = [
            f"# critsense {VERSION}",
            f"# command: {command}",
            f"# config: {_config_for_header(config)}",
        ]
        lines += [f"# note: {note}" for note in notes]
        lines.append(",".join(columns))
        lines += [",".join(_fmt_cell(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "tool": "critsense",
            "version": VERSION,
            "command": command,
            "config": _recorded_config(config),
            "notes": list(notes),
            "columns": columns,
            "rows": [
                [None if v is None else (v.item() if isinstance(v, np.generic) else v) for v in row]
                for row in rows
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
    if config["out"]:
        with open(config["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if config.get("plot"):
        from . import plotting

        plotting.render_figure(command, columns, rows, config["plot"])


# -------------------------------------------------------------------- main --


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="critsense",
        description="Quantum Fisher information for su(1,1) critical sensing",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("qfi", "QFI table over (estimand x time)"),
        ("sweep", "QFI / bound table over the estimand or the anisotropy ratio"),
        ("brachistochrone", "coefficient-space cycloid samples"),
        ("verify", "run the invariant and cross-oracle suites"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--model", choices=["qrm", "lmg", "apt", "rabi-full"])
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a dotted config key, e.g. params.zeta=2")
        p.add_argument("--with-oracle", action="store_true",
                       help="add finite-difference oracle columns")
        p.add_argument("--compat-paper-case-iii", action="store_true",
                       help="drop the hx term exactly at the critical point")
        p.add_argument("--nu", type=int, help="number of measurements in the bound")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--plot", help="also render a figure of the table to this path")
        p.add_argument("--seed", type=int, help="seed for randomized suites")
        p.add_argument("--jobs", type=int, help="worker threads for grid points")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors; that code is
        return 0 if exc.code == 0 else 1  # reserved here for non-convergence
    try:
        config = load_config(args)
        if args.command == "verify":
            results, passed = _run_verify(config)
            lines = [f"critsense {VERSION} verify (seed {config['seed']})"]
            lines += [
                f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}" for r in results
            ]
            lines.append(
                f"{sum(r.passed for r in results)}/{len(results)} checks passed"
            )
            text = "\n".join(lines) + "\n"
            if config["out"]:
                with open(config["out"], "w") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return 0 if passed else 3
        if args.command == "qfi":
            columns, rows = _run_qfi(config)
        elif args.command == "sweep":
            columns, rows = _run_sweep(config)
        else:
            columns, rows = _run_brachistochrone(config)
        notes = []
        if config["model"] == "lmg" and float(config["params"].get("gamma", 0.0)) == 1.0:
            notes.append(
                "gamma = 1 is degenerate: the generator loses its cross terms and "
                "the QFI keeps only the trivial t^2 part"
            )
        _emit_table(args.command, config, columns, rows, notes)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except oracle.OracleError as exc:
        print(f"numerical non-convergence: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
