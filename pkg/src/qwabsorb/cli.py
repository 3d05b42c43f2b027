"""
Command-line front end.

Exit codes: 0 on success, 2 for invalid arguments or configuration, 3 when
the library raises (non-convergence, quadrature tolerance, singular
integrand).  Settings are merged as command-line flags over ``--config``
file values over built-in defaults.  Relative ``--output`` paths are
resolved against ``$QWABSORB_OUTPUT_DIR`` when it is set.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import export
from .analysis import (
    ANALYSIS_TERMINATION,
    convergence_series,
    fit_exponential,
    parameter_sweep,
)
from .asymptotics import pl_pr_asymptotic
from .core import CoinAmplitudes, check_theta, initial_amplitudes, standard_to_eigen
from .errors import NonConvergenceError, QWAbsorbError
from .exact import coefficients_exact
from .figures import FIGURES, figure_tables
from .quadrature import QuadratureSpec, default_spec
from .simulator import TerminationSpec, WalkConfig, run_walk

__all__ = ["main", "run_command", "parse_config", "CommandResult", "UsageError"]

OUTPUT_DIR_ENV = "QWABSORB_OUTPUT_DIR"

DEFAULTS = {
    "eps": 1e-12,
    "max_steps": 10**7,
    "nodes_per_panel": 16,
    "tol": 1e-9,
    "form": "direct",
    "n_min": 2,
    "n_max": 10,
    "workers": 1,
    "grid": None,
    "output": None,
}
DEFAULT_FORMAT = {
    "simulate": "json",
    "coefficients": "json",
    "asymptotic": "json",
    "converge": "csv",
    "sweep": "csv",
    "figure": "csv",
}
CONFIG_KEYS = {
    "theta", "theta_deg", "n", "rho", "beta", "a", "b", "eps", "max_steps",
    "panels", "nodes_per_panel", "tol", "form", "format", "output",
    "n_min", "n_max", "kind", "grid", "workers", "name",
}


class UsageError(Exception):
    """Invalid command-line or configuration input (exit code 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_config(path: str | os.PathLike) -> dict:
    """Read a JSON object of settings keyed by option name (``n_min``, ...).

    Raises
    ------
    UsageError
        If the file is missing, is not valid JSON (the message carries the
        line and column), is not an object, or has unknown keys.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    if not text.strip():
        return {}
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise UsageError(f"config {path}: top level must be a JSON object")
    doc = {k.replace("-", "_"): v for k, v in doc.items()}
    unknown = sorted(set(doc) - CONFIG_KEYS)
    if unknown:
        raise UsageError(f"config {path}: unknown keys {', '.join(unknown)}")
    return doc


def _add_common(p: argparse.ArgumentParser, *, walk: bool = True, initial: bool = True) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="JSON file of settings; flags take precedence")
    p.add_argument("--format", choices=("csv", "json"), default=S)
    p.add_argument("--output", "-o", default=S, help="output file (default: standard output)")
    if walk:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--theta", type=float, default=S, help="coin angle in radians, [0, pi/2]")
        g.add_argument("--theta-deg", type=float, default=S, help="coin angle in degrees")
    if initial:
        p.add_argument("--rho", type=float, default=S, help="weight on the coin eigenvector |theta->")
        p.add_argument("--beta", type=float, default=S, help="relative eigenbasis phase (radians)")
        p.add_argument("--a", default=S, help="complex amplitude of |L>, e.g. 0.6+0.8j")
        p.add_argument("--b", default=S, help="complex amplitude of |R>")


def _add_termination(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--eps", type=float, default=S, help="stop when survival drops below this")
    p.add_argument("--max-steps", type=int, default=S)


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parser = _Parser(prog="qwabsorb", description="Absorption probabilities of a two-state quantum walk.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="simulate until absorption; JSON summary or CSV trace")
    _add_common(p)
    p.add_argument("--n", type=int, default=S, help="sinks sit at -N and +N")
    _add_termination(p)

    p = sub.add_parser("coefficients", help="finite-N coefficients by quadrature")
    _add_common(p, initial=False)
    p.add_argument("--n", type=int, default=S)
    p.add_argument("--panels", type=int, default=S, help="initial Gauss-Legendre panels")
    p.add_argument("--nodes", dest="nodes_per_panel", type=int, default=S)
    p.add_argument("--tol", type=float, default=S, help="bound on |C1+C2-1| and |Im C3|")
    p.add_argument("--form", choices=("direct", "chebyshev"), default=S)

    p = sub.add_parser("asymptotic", help="large-N closed forms")
    _add_common(p)

    p = sub.add_parser("converge", help="P_L(N) against the large-N value, with exponential fit")
    _add_common(p)
    p.add_argument("--n-min", type=int, default=S)
    p.add_argument("--n-max", type=int, default=S)
    _add_termination(p)

    p = sub.add_parser("sweep", help="simulated P_L across a grid of rho, beta or theta")
    _add_common(p)
    p.add_argument("--kind", choices=("rho", "beta", "theta"), default=S)
    p.add_argument("--n", type=int, default=S)
    p.add_argument("--grid", default=S, help="'start:stop:count' or a comma-separated list")
    p.add_argument("--workers", type=int, default=S)
    _add_termination(p)

    p = sub.add_parser("figure", help="data table for one of the standard plots (fig1..fig8)")
    p.add_argument("name", choices=sorted(FIGURES))
    _add_common(p, walk=False, initial=False)
    p.add_argument("--workers", type=int, default=S)
    return parser


# -- value resolution ---------------------------------------------------------

def _float(cfg: dict, key: str) -> float:
    try:
        value = float(cfg[key])
    except (TypeError, ValueError):
        raise UsageError(f"{key} must be a number, got {cfg[key]!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"{key} must be finite")
    return value


def _int(cfg: dict, key: str, minimum: int) -> int:
    value = cfg[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise UsageError(f"{key} must be an integer, got {value!r}")
    if value < minimum:
        raise UsageError(f"{key} must be >= {minimum}, got {value}")
    return int(value)


def _complex(value, key: str) -> complex:
    try:
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return complex(float(value[0]), float(value[1]))
        if isinstance(value, str):
            return complex(value.replace(" ", "").replace("i", "j"))
        return complex(value)
    except (TypeError, ValueError):
        raise UsageError(f"{key} must be a complex number, got {value!r}") from None


def _require(cfg: dict, *keys: str) -> None:
    missing = [k for k in keys if k not in cfg]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))


def _theta(cfg: dict, *, allow_half_pi: bool = True) -> float:
    if "theta" in cfg and "theta_deg" in cfg:
        raise UsageError("give either theta or theta_deg, not both")
    if "theta_deg" in cfg:
        value = math.radians(_float(cfg, "theta_deg"))
    else:
        _require(cfg, "theta")
        value = _float(cfg, "theta")
    try:
        return check_theta(value, allow_half_pi=allow_half_pi)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _initial(cfg: dict, theta: float) -> tuple[CoinAmplitudes, float, float]:
    """Resolve the initial coin state; returns (amplitudes, rho, beta)."""
    eigen = "rho" in cfg or "beta" in cfg
    standard = "a" in cfg or "b" in cfg
    if eigen and standard:
        raise UsageError("give the initial state either as --rho/--beta or as --a/--b, not both")
    if standard:
        _require(cfg, "a", "b")
        a, b = _complex(cfg["a"], "a"), _complex(cfg["b"], "b")
        norm = abs(a) ** 2 + abs(b) ** 2
        if abs(norm - 1.0) > 1e-6:
            raise UsageError(f"|a|^2 + |b|^2 = {norm!r}; the initial state must be normalized")
        psi = CoinAmplitudes.normalized(a, b)
        coords, _ = standard_to_eigen(psi, theta)
        return psi, coords.rho, coords.beta
    _require(cfg, "rho")
    rho = _float(cfg, "rho")
    beta = _float(cfg, "beta") if "beta" in cfg else 0.0
    if not 0.0 <= rho <= 1.0:
        raise UsageError(f"rho must lie in [0, 1], got {rho!r}")
    return initial_amplitudes(theta, rho, beta), rho, beta


def _termination(cfg: dict, default_eps: float) -> TerminationSpec:
    eps = _float(cfg, "eps") if "eps" in cfg else default_eps
    if not eps > 0.0:
        raise UsageError(f"eps must be positive, got {eps!r}")
    return TerminationSpec(eps=eps, max_steps=_int(cfg, "max_steps", 1))


def _grid(spec) -> list[float] | None:
    if spec is None:
        return None
    if isinstance(spec, list):
        values = spec
    elif isinstance(spec, str) and spec.count(":") == 2:
        lo, hi, count = spec.split(":")
        try:
            lo, hi, count = float(lo), float(hi), int(count)
        except ValueError:
            raise UsageError(f"bad grid {spec!r}; expected start:stop:count") from None
        if count < 1:
            raise UsageError("grid count must be >= 1")
        if count == 1:
            return [lo]
        return [lo + (hi - lo) * j / (count - 1) for j in range(count)]
    elif isinstance(spec, str):
        values = [v for v in spec.split(",") if v.strip()]
    else:
        raise UsageError(f"bad grid {spec!r}")
    try:
        return [float(v) for v in values]
    except (TypeError, ValueError):
        raise UsageError(f"bad grid {spec!r}") from None


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


# -- subcommands ----------------------------------------------------------------

def _cmd_simulate(cfg: dict) -> tuple[str, int]:
    theta = _theta(cfg)
    _require(cfg, "n")
    n = _int(cfg, "n", 2)
    psi, _, _ = _initial(cfg, theta)
    term = _termination(cfg, DEFAULTS["eps"])
    trace = run_walk(WalkConfig(n, theta, psi), term)
    if not trace.converged:
        raise NonConvergenceError(
            f"no convergence: survival {float(trace.survival[-1]):.6g} >= eps={term.eps:g} "
            f"after {trace.steps} steps (theta={theta!r}, N={n})",
            trace=trace,
        )
    if cfg["format"] == "csv":
        return export.csv_text(export.TRACE_HEADER, export.trace_rows(trace)), 0
    doc = {
        "theta": theta,
        "n": n,
        "a": _pair(psi.a),
        "b": _pair(psi.b),
        "p_left": trace.p_left,
        "p_right": trace.p_right,
        "steps": trace.steps,
        "survival": float(trace.survival[-1]),
        "terminated": trace.terminated,
        "tolerance": term.eps,
    }
    return export.json_text(doc), 0


def _cmd_coefficients(cfg: dict) -> tuple[str, int]:
    theta = _theta(cfg, allow_half_pi=False)
    if theta == 0.0:
        raise UsageError("coefficients need theta in (0, pi/2)")
    _require(cfg, "n")
    n = _int(cfg, "n", 2)
    base = default_spec(n)
    try:
        quad = QuadratureSpec(
            panels=_int(cfg, "panels", 2) if "panels" in cfg else base.panels,
            nodes_per_panel=_int(cfg, "nodes_per_panel", 8),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cfg["form"] not in ("direct", "chebyshev"):
        raise UsageError(f"form must be 'direct' or 'chebyshev', got {cfg['form']!r}")
    triple = coefficients_exact(theta, n, quad, form=cfg["form"], tol=_float(cfg, "tol"))
    doc = triple.to_dict()
    if cfg["format"] == "csv":
        return export.csv_text(tuple(doc), [tuple(doc.values())]), 0
    return export.json_text(doc), 0


def _cmd_asymptotic(cfg: dict) -> tuple[str, int]:
    theta = _theta(cfg, allow_half_pi=False)
    _, rho, _ = _initial(cfg, theta)
    doc = pl_pr_asymptotic(theta, rho).to_dict()
    if cfg["format"] == "csv":
        return export.csv_text(tuple(doc), [tuple(doc.values())]), 0
    return export.json_text(doc), 0


def _cmd_converge(cfg: dict) -> tuple[str, int]:
    theta = _theta(cfg, allow_half_pi=False)
    if theta == 0.0:
        raise UsageError("converge needs theta in (0, pi/2)")
    _, rho, beta = _initial(cfg, theta)
    n_min, n_max = _int(cfg, "n_min", 2), _int(cfg, "n_max", 2)
    if n_max < n_min:
        raise UsageError(f"n_max ({n_max}) must be >= n_min ({n_min})")
    term = _termination(cfg, ANALYSIS_TERMINATION.eps)
    series = convergence_series(theta, rho, beta, n_min, n_max, term)
    fit = fit_exponential(series)
    if cfg["format"] == "csv":
        text = export.csv_text(export.CONVERGENCE_HEADER, export.convergence_rows(series))
        text += "\n" + export.csv_text(export.FIT_HEADER, export.fit_rows(fit))
        return text, 0
    return export.json_text({"series": export.series_dict(series), "fit": fit.to_dict()}), 0


def _cmd_sweep(cfg: dict) -> tuple[str, int]:
    _require(cfg, "kind")
    kind = cfg["kind"]
    if kind not in ("rho", "beta", "theta"):
        raise UsageError(f"kind must be rho, beta or theta, got {kind!r}")
    if "a" in cfg or "b" in cfg:
        raise UsageError("sweeps take the initial state as --rho/--beta")
    n = _int(cfg, "n", 2) if "n" in cfg else 2
    fixed = {}
    if kind != "theta":
        fixed["theta"] = _theta(cfg, allow_half_pi=False)
    if kind != "rho":
        _require(cfg, "rho")
        fixed["rho"] = _float(cfg, "rho")
        if not 0.0 <= fixed["rho"] <= 1.0:
            raise UsageError("rho must lie in [0, 1]")
    if kind != "beta" and "beta" in cfg:
        fixed["beta"] = _float(cfg, "beta")
    term = _termination(cfg, DEFAULTS["eps"])
    try:
        rows = parameter_sweep(kind, fixed, _grid(cfg["grid"]), n, term=term,
                               workers=_int(cfg, "workers", 1))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cfg["format"] == "csv":
        return export.csv_text(export.SWEEP_HEADER, export.sweep_rows(rows)), 0
    records = [dict(zip(export.SWEEP_HEADER, r)) for r in export.sweep_rows(rows)]
    return export.json_text({"kind": kind, "n": n, "rows": records}), 0


def _cmd_figure(cfg: dict) -> tuple[str, int]:
    tables = figure_tables(cfg["name"], workers=_int(cfg, "workers", 1))
    if cfg["format"] == "csv":
        return "\n".join(export.csv_text(t.header, t.rows) for t in tables), 0
    return export.json_text({"figure": cfg["name"], **{t.name: t.records() for t in tables}}), 0


COMMANDS = {
    "simulate": _cmd_simulate,
    "coefficients": _cmd_coefficients,
    "asymptotic": _cmd_asymptotic,
    "converge": _cmd_converge,
    "sweep": _cmd_sweep,
    "figure": _cmd_figure,
}


def resolve_settings(argv: list[str]) -> dict:
    """Parse ``argv`` and merge it with the config file and the defaults."""
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    file_cfg = parse_config(args.pop("config")) if "config" in args else {}
    if "theta" in args:
        file_cfg.pop("theta_deg", None)
    if "theta_deg" in args:
        file_cfg.pop("theta", None)
    # an explicit initial-state form on the command line replaces the file's
    if {"rho", "beta"} & set(args):
        file_cfg.pop("a", None), file_cfg.pop("b", None)
    if {"a", "b"} & set(args):
        file_cfg.pop("rho", None), file_cfg.pop("beta", None)
    settings = {**file_cfg, **args}
    for key, value in DEFAULTS.items():
        settings.setdefault(key, value)
    settings.setdefault("format", DEFAULT_FORMAT[command])
    if settings["format"] not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {settings['format']!r}")
    settings["command"] = command
    return settings


def _output_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


@dataclass
class CommandResult:
    """Exit code plus the emitted document (or the one-line diagnostic)."""

    code: int
    text: str
    path: Path | None = None   # where the document was written, if not stdout


def run_command(argv: list[str]) -> CommandResult:
    """Run one invocation without touching stdout or stderr.

    On success the document is written to the configured output file, if
    any, and returned in ``text`` either way.
    """
    try:
        cfg = resolve_settings(argv)
        text, code = COMMANDS[cfg["command"]](cfg)
    except UsageError as exc:
        return CommandResult(2, str(exc))
    except QWAbsorbError as exc:
        return CommandResult(3, f"qwabsorb: {type(exc).__name__}: {exc}")
    except RuntimeError as exc:
        # quadrature refinement limit
        return CommandResult(3, f"qwabsorb: {exc}")
    except ValueError as exc:
        return CommandResult(2, f"qwabsorb: {exc}")
    path = None
    if cfg["output"]:
        path = _output_path(cfg["output"])
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8", newline="\n")
        except OSError as exc:
            return CommandResult(2, f"qwabsorb: cannot write {path}: {exc.strerror}")
    return CommandResult(code, text, path)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        result = run_command(argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if result.code == 0:
        if result.path is None:
            sys.stdout.write(result.text)
    else:
        print(result.text.splitlines()[0], file=sys.stderr)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
