"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 tolerance breach,
3 numerical failure.  CSV output is comma separated with a header row and LF
line endings; floats are printed with 17 significant digits.  JSON output
uses Python's shortest round-trip float representation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .classical import (Chart, PhaseState, Scheme, hamiltonian_qp, integrate_orbit, measure_period, orbit_energy,
                        orbit_period)
from .core import OscillatorParams, X_to_x, derive, x_to_X, P_to_p
from .eigenfunctions import count_nodes, eigenfunction, evaluate
from .errors import DomainError, NLHOError
from .fock import coherent_type2, eigen_residual
from .quantumgrid.coherent import (a_residual, b_eigen_residual, coherent_type1, coherent_type3, f_gamma,
                                   husimi_average, zprime_residual)
from .quantumgrid.complexifier import heisenberg_check, symmetric_product_check
from .quantumgrid.grid import Grid
from .quantumgrid.oracle import default_grid, fd_spectrum
from .spectrum import bound_state_count, energy_level, epsilon_level, f_cutoff, f_deformation, n_max
from .validation import (DEFAULT_TOLERANCES, ValidationConfig, criterion_classical_complexifier,
                         criterion_quantum_complexifier, run_all)

EXIT_OK, EXIT_CONFIG, EXIT_TOLERANCE, EXIT_NUMERIC = 0, 1, 2, 3

#: tolerances used by the single-purpose subcommands
CLI_TOLERANCES = dict(DEFAULT_TOLERANCES, period_rel=1e-5)

_CONFIG_KEYS = {"lambda": float, "mass": float, "omega": float, "hbar": float, "grid_n": int,
                "grid_l": float, "format": str, "out": str}


class ConfigError(Exception):
    """Malformed configuration; carries a location for diagnostics."""

    def __init__(self, message, line=None, column=None):
        loc = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(loc + message)
        self.line = line
        self.column = column


@dataclass
class RunConfig:
    params: OscillatorParams = field(default_factory=OscillatorParams)
    grid_N: int = 4000
    grid_L: float | None = None
    fmt: str = "csv"
    out: str | None = None
    tolerances: dict = field(default_factory=dict)

    def tol(self, name):
        return float(self.tolerances.get(name, CLI_TOLERANCES[name]))


def _coerce(key, raw, line=None, column=None):
    if key.startswith("tol."):
        name = key[4:]
        if name not in DEFAULT_TOLERANCES:
            raise ConfigError(f"unknown tolerance {name!r}", line, column)
        typ = float
    elif key in _CONFIG_KEYS:
        typ = _CONFIG_KEYS[key]
    else:
        raise ConfigError(f"unknown key {key!r}", line, column)
    try:
        return typ(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"bad value {raw!r} for {key!r}", line, column) from None


def parse_config_text(text: str) -> dict:
    """Parse ``key=value`` lines (``#`` comments) or a JSON object.

    JSON may carry tolerances either as ``"tol.NAME"`` keys or as a nested
    ``"tolerances"`` object.
    """
    stripped = text.lstrip()
    out = {}
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(exc.msg, exc.lineno, exc.colno) from None
        for key, val in data.items():
            if key == "tolerances" and isinstance(val, dict):
                for name, tv in val.items():
                    out["tol." + name] = _coerce("tol." + name, tv)
            else:
                out[key] = _coerce(key, val)
        return out
    for ln, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        if "=" not in body:
            col = len(body) - len(body.lstrip()) + 1
            raise ConfigError("expected key=value", ln, col)
        key, val = body.split("=", 1)
        col = len(key) - len(key.lstrip()) + 1
        key = key.strip()
        vcol = body.index("=") + 2
        if not key:
            raise ConfigError("empty key", ln, col)
        if key not in _CONFIG_KEYS and not key.startswith("tol."):
            raise ConfigError(f"unknown key {key!r}", ln, col)
        out[key] = _coerce(key, val.strip(), ln, vcol)
    return out


def _build_config(args) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc.strerror}") from None
        values.update(parse_config_text(text))
    for key, attr in (("lambda", "lam"), ("mass", "mass"), ("omega", "omega"), ("hbar", "hbar"),
                      ("grid_n", "grid_n"), ("grid_l", "grid_l"), ("format", "format"), ("out", "out")):
        v = getattr(args, attr, None)
        if v is not None:
            values[key] = v
    for item in getattr(args, "tol", None) or []:
        if "=" not in item:
            raise ConfigError(f"--tol expects NAME=F, got {item!r}")
        name, val = item.split("=", 1)
        values["tol." + name.strip()] = _coerce("tol." + name.strip(), val)
    fmt = values.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    try:
        params = OscillatorParams(values.get("mass", 1.0), values.get("omega", 1.0),
                                  values.get("lambda", 0.1), values.get("hbar", 1.0))
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    N = values.get("grid_n", 4000)
    if N < 16:
        raise ConfigError(f"grid_n must be >= 16, got {N}")
    L = values.get("grid_l")
    if L is not None and not L > 0:
        raise ConfigError(f"grid_l must be positive, got {L}")
    tols = {k[4:]: v for k, v in values.items() if k.startswith("tol.")}
    return RunConfig(params, N, L, fmt, values.get("out"), tols)


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, complex):
        return {"re": _jsonable(x.real), "im": _jsonable(x.imag)}
    return x


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False) + "\n"


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(cfg, header, rows, summary):
    if cfg.fmt == "json":
        _emit(cfg, _json_text(dict(summary, rows=[dict(zip(header, r)) for r in rows])))
    else:
        _emit(cfg, _csv_text(header, rows))
        sys.stderr.write(_json_text(summary))


def _grid(cfg, fallback: Grid) -> Grid:
    return Grid(cfg.grid_L if cfg.grid_L is not None else fallback.L, cfg.grid_N)


#: a level is compared with the FD oracle only if the box holds this many decay lengths
RESOLVED_DECAY_LENGTHS = 12.0


def _resolved(n, p, L) -> bool:
    if p.undeformed:
        return True
    kappa = math.sqrt(p.lam) * (math.sqrt(0.25 + derive(p).v) - n - 0.5)
    return kappa * L >= RESOLVED_DECAY_LENGTHS


def cmd_spectrum(cfg: RunConfig, levels=None) -> int:
    """Closed-form levels against the FD oracle.

    Levels whose exponential tail does not fit in the box (near ``v = 0`` the
    single bound state is arbitrarily shallow) cannot be resolved by any
    finite grid; their FD column is null and they are listed as unresolved
    instead of being compared.
    """
    p = cfg.params
    count = bound_state_count(p)
    k = int(min(count, 10)) if levels is None else int(levels)
    if k < 1:
        raise DomainError(f"levels must be >= 1, got {k}")
    if not p.undeformed and k > count:
        raise DomainError(f"only {count} bound levels exist, {k} requested")
    grid = _grid(cfg, default_grid(p, cfg.grid_N, k))
    ok_levels = [n for n in range(k) if _resolved(n, p, grid.L)]
    fd = fd_spectrum(p, grid, len(ok_levels)).values if ok_levels else np.empty(0)
    tol = cfg.tol("spectrum_rel")
    rows, worst = [], 0.0
    v = derive(p).v
    for n in range(k):
        E = energy_level(n, p)
        if n < len(ok_levels):
            Efd = fd[n]
            gap = abs(Efd - E) / abs(E) if E != 0 else abs(Efd)
            worst = max(worst, gap)
        else:
            Efd = gap = math.nan
        eps = epsilon_level(n, v) if not p.undeformed else math.inf
        rows.append((n, eps, E, Efd, gap, f_deformation(n, p)))
    header = ["n", "epsilon_n", "E_n", "E_n_fd", "rel_gap", "f_n"]
    passed = worst < tol
    summary = {"levels": k, "grid_L": grid.L, "grid_N": grid.N, "max_rel_gap": worst, "tolerance": tol,
               "unresolved_levels": list(range(len(ok_levels), k)), "passed": passed}
    _table(cfg, header, rows, summary)
    return EXIT_OK if passed else EXIT_TOLERANCE


def cmd_wavefunction(cfg: RunConfig, n: int, samples: int = 401) -> int:
    p = cfg.params
    if n < 0 or (not p.undeformed and n > n_max(derive(p).v)):
        raise DomainError(f"level {n} is not bound")
    grid = _grid(cfg, default_grid(p, cfg.grid_N, n + 1))
    orc = fd_spectrum(p, grid, n + 1)
    phi = eigenfunction(n, p)
    X = grid.points
    exact = evaluate(phi, X)
    oracle = orc.vectors[:, n]
    dist = grid.norm(exact - oracle)
    stride = max(1, (grid.N - 1) // max(samples - 1, 1))
    idx = np.arange(0, grid.N, stride)
    rows = [(X[i], float(X_to_x(X[i], p)), exact[i], oracle[i]) for i in idx]
    header = ["X", "x", "phi_n", "oracle_phi_n"]
    tol = cfg.tol("eigvec_l2")
    summary = {"n": n, "l2_distance": dist, "nodes": count_nodes(exact), "tolerance": tol, "passed": dist < tol,
               "grid_L": grid.L, "grid_N": grid.N}
    _table(cfg, header, rows, summary)
    return EXIT_OK if dist < tol else EXIT_TOLERANCE


def cmd_classical(cfg: RunConfig, A: float, periods: int = 100, steps_per_period: int = 1000,
                  scheme: str = "leapfrog_xp", stride: int = 100) -> int:
    if not A > 0:
        raise DomainError("amplitude must be positive")
    p = cfg.params
    T = orbit_period(A, p)
    dt = T / steps_per_period
    n_steps = periods * steps_per_period
    sch = Scheme(scheme)
    if sch is Scheme.LEAPFROG_XP:
        start = PhaseState(float(x_to_X(A, p)), 0.0, Chart.XP_CHART)
    else:
        start = PhaseState(A, 0.0, Chart.xp_CHART)
    tr = integrate_orbit(start, p, dt, n_steps, sch)
    measured = measure_period(tr)
    rel = abs(measured / T - 1.0)
    tol = cfg.tol("period_rel")
    summary = {"measured_period": measured, "predicted_period": T, "relative_error": rel,
               "energy_drift": tr.energy_drift, "predicted_energy": orbit_energy(A, p), "scheme": sch.value,
               "tolerance": tol, "passed": rel < tol}
    sel = slice(None, None, max(1, stride))
    q, pq, t = tr.q[sel], tr.p[sel], tr.t[sel]
    if tr.chart is Chart.XP_CHART:
        X, P = q, pq
        x, pp = X_to_x(X, p), P_to_p(X, P, p)
    else:
        x, pp = q, pq
        X, P = x_to_X(x, p), np.sqrt(1.0 + p.lam * x * x) * pp
    E = hamiltonian_qp(q, pq, tr.chart, p)
    rows = list(zip(t, X, P, x, pp, E))
    _table(cfg, ["t", "X", "P", "x", "p", "E"], rows, summary)
    return EXIT_OK if rel < tol else EXIT_TOLERANCE


def _parse_label(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise DomainError(f"cannot parse complex label {text!r}") from None


def cmd_coherent(cfg: RunConfig, kind: int, label: complex, zeta_tol: float = 1e-10) -> int:
    p = cfg.params
    b = math.sqrt(derive(p).b2)
    if kind == 2:
        D = f_cutoff(p) + 1 if not p.undeformed else 40
        st = coherent_type2(label, p, D)
        res = eigen_residual(st, p)
        rows = [(n, c.real, c.imag, abs(c) ** 2) for n, c in enumerate(st.coeffs)]
        summary = {"type": 2, "label": label, "measured": {"b_eigen_residual": res, "tail_bound": st.residual_bound,
                                                           "tail_mass": st.tail_mass}, "note": st.note,
                   "passed": res <= 2.0 * st.residual_bound}
        _table(cfg, ["n", "re", "im", "prob"], rows, summary)
        return EXIT_OK if summary["passed"] else EXIT_TOLERANCE
    if kind == 1:
        grid = _grid(cfg, Grid(12.0 * b, cfg.grid_N))
        st = coherent_type1(label, p, grid)
        ar = a_residual(st, label, p)
        measured = {"A_eigen_residual": ar, "f_gamma": f_gamma(label, p),
                    "husimi_average": husimi_average(label, p) if not p.undeformed else label}
        if not p.undeformed:
            small = Grid(grid.L, 256)
            measured["Zprime_residual_sinc256"] = zprime_residual(coherent_type1(label, p, small), label, p,
                                                                  order="sinc")
            measured["Zprime_eigenvalue_gap"] = abs(f_gamma(label, p) - label)
        tol = cfg.tol("a_eigen")
        passed = ar < tol
    elif kind == 3:
        if p.undeformed:
            raise DomainError("type-3 states need lam > 0")
        grid = _grid(cfg, Grid(10.0 / math.sqrt(p.lam), cfg.grid_N))
        st = coherent_type3(label, p, grid, tol=zeta_tol)
        measured = {"B_eigen_residual": b_eigen_residual(st, label, p), "norm_drift": st.meta["norm_drift"],
                    "steps": st.meta["steps"]}
        tol = cfg.tol("norm_conservation")
        passed = st.meta["norm_drift"] < tol
    else:
        raise DomainError(f"coherent-state type must be 1, 2 or 3, got {kind}")
    rows = [(X, v.real, v.imag, abs(v)) for X, v in zip(grid.points, st.values)]
    summary = {"type": kind, "label": label, "grid_L": grid.L, "grid_N": grid.N, "measured": measured,
               "passed": passed}
    _table(cfg, ["X", "re", "im", "abs"], rows, summary)
    return EXIT_OK if passed else EXIT_TOLERANCE


def _report(cfg, results, measured=None):
    """JSON report on the output stream (whatever ``--format``), PASS/FAIL lines on stderr."""
    ok = all(r.passed for r in results)
    doc = {"passed": ok, "criteria": [r.as_dict() for r in results]}
    if measured is not None:
        doc["measured"] = measured
    _emit(cfg, _json_text(doc))
    for r in results:
        sys.stderr.write(r.line() + "\n")
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_complexifier_check(cfg: RunConfig) -> int:
    vc = ValidationConfig(cfg.params, tolerances=cfg.tolerances)
    results = [criterion_classical_complexifier(vc), criterion_quantum_complexifier(vc)]
    p = cfg.params
    extra = {}
    if not p.undeformed:
        b = math.sqrt(derive(p).b2)
        sym = symmetric_product_check(p.with_lam(0.05 / derive(p).b2), Grid(12.0 * b, 256))
        g = Grid(10.0 * b, 256)
        res, rate = heisenberg_check(p, g, np.exp(-((g.points - 0.5 * b) ** 2) / (2 * b * b)))
        extra = {"symmetric_product_residual": sym.residual, "heisenberg_residuals": list(res),
                 "heisenberg_order": rate}
    return _report(cfg, results, extra)


def cmd_validate(cfg: RunConfig) -> int:
    L = cfg.grid_L if cfg.grid_L is not None else 80.0
    vc = ValidationConfig(cfg.params, cfg.grid_N, L, dict(cfg.tolerances))
    return _report(cfg, run_all(vc))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(parser, suppress):
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", metavar="PATH", default=d)
    parser.add_argument("--lambda", dest="lam", type=float, metavar="F", default=d)
    parser.add_argument("--mass", type=float, metavar="F", default=d)
    parser.add_argument("--omega", type=float, metavar="F", default=d)
    parser.add_argument("--hbar", type=float, metavar="F", default=d)
    parser.add_argument("--grid-n", dest="grid_n", type=int, metavar="INT", default=d)
    parser.add_argument("--grid-l", dest="grid_l", type=float, metavar="F", default=d)
    parser.add_argument("--format", choices=("csv", "json"), default=d)
    parser.add_argument("--out", metavar="PATH", default=d)
    parser.add_argument("--tol", action="append", metavar="NAME=F", default=d)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="nlho", description="Nonlinear harmonic oscillator: spectra, states and checks.")
    ap.add_argument("--version", action="version", version=__version__)
    _common(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    _common(common, suppress=True)
    s = sub.add_parser("spectrum", parents=[common], help="closed-form vs FD energies")
    s.add_argument("--levels", type=int, default=None)
    s = sub.add_parser("wavefunction", parents=[common], help="sample phi_n against the FD oracle")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--samples", type=int, default=401)
    s = sub.add_parser("classical", parents=[common], help="integrate an orbit and measure its period")
    s.add_argument("--amplitude", type=float, default=1.0)
    s.add_argument("--periods", type=int, default=100)
    s.add_argument("--steps-per-period", type=int, default=1000)
    s.add_argument("--scheme", choices=("leapfrog_xp", "rk4"), default="leapfrog_xp")
    s.add_argument("--stride", type=int, default=100)
    s = sub.add_parser("coherent", parents=[common], help="build a coherent state of type 1, 2 or 3")
    s.add_argument("--type", dest="kind", type=int, choices=(1, 2, 3), required=True)
    s.add_argument("--label", default="0")
    sub.add_parser("complexifier-check", parents=[common], help="classical and quantum complexifier identities")
    sub.add_parser("validate", parents=[common], help="run the acceptance suite")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors, --help, --version
        return int(exc.code or 0)
    try:
        cfg = _build_config(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    try:
        if args.command == "spectrum":
            return cmd_spectrum(cfg, args.levels)
        if args.command == "wavefunction":
            return cmd_wavefunction(cfg, args.n, args.samples)
        if args.command == "classical":
            return cmd_classical(cfg, args.amplitude, args.periods, args.steps_per_period, args.scheme, args.stride)
        if args.command == "coherent":
            return cmd_coherent(cfg, args.kind, _parse_label(args.label))
        if args.command == "complexifier-check":
            return cmd_complexifier_check(cfg)
        return cmd_validate(cfg)
    except DomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except (NLHOError, FloatingPointError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
