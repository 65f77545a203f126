"""Command-line front end.

Subcommands write CSV tables, 16-bit PGM space-time maps and a JSON manifest
into ``--out``. Time flags are dimensionless, in units of ``1/J`` (``J t``).

Exit codes: 0 success, 1 validation outside tolerance, 2 bad usage,
3 invalid parameters or violated preconditions, 4 numerical failure,
5 I/O failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import alpha_markov, evolve
from .errors import CCATrapError, ConvergenceError, QuadratureError
from .export import export_heatmap, format_float, write_csv, write_manifest
from .model import ModelParams
from .observables import DEFAULT_EPS_C, eps_atr, eps_floc, localization_metrics, threshold
from .oracle import validate as oracle_validate
from .quadrature import QuadratureSpec
from .spectrum import bound_energies, bound_state

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_NUMERICAL = 4
EXIT_IO = 5

SUBCOMMANDS = ("spectrum", "emit", "field", "localization", "thresholds", "validate", "figure")

FIG2_ETAS = (0.1, 0.4, 0.8, 1.0, 2.0, 10.0)
FIG3_ETAS = (0.1, 0.8, 2.0)
FIG3_SNAPSHOTS = {0.1: 350.0, 0.8: 95.5, 2.0: 95.5}
FIG5_ETAS = (0.8, 2.0)


def _sweep_etas():
    return tuple(float(v) for v in np.geomspace(0.01, 100.0, 200))


@dataclass
class RunConfig:
    """Everything that determines a run; serialises to flat ``key = value`` text."""

    subcommand: str = "emit"
    J: float = 1.0
    g: float = 1.0
    tmin: float = 0.0
    tmax: float = 10.0
    tsteps: int = 101
    window: int = 20
    tol: float = 1e-10
    out: str = "out"
    eps_c: float = DEFAULT_EPS_C
    oracle_N: int = 1024
    etas: tuple = ()
    figure: int = 0

    @property
    def params(self) -> ModelParams:
        return ModelParams(J=self.J, g=self.g)

    @property
    def times(self) -> np.ndarray:
        """Physical times ``(J t) / J`` of the requested grid."""
        if self.tsteps < 1:
            raise CCATrapError("tsteps must be at least 1")
        return np.linspace(self.tmin, self.tmax, self.tsteps) / self.J

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["etas"] = list(self.etas)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        kw = dict(d)
        kw["etas"] = tuple(float(v) for v in kw.get("etas", ()))
        return cls(**kw)

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                text = ",".join(format_float(e) for e in v)
            elif isinstance(v, float):
                text = repr(v)
            else:
                text = str(v)
            lines.append(f"{f.name} = {text}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        return cls(**_parse_pairs(text))


_FIELD_TYPES = {"J": float, "g": float, "tmin": float, "tmax": float, "tsteps": int,
                "window": int, "tol": float, "out": str, "eps_c": float, "oracle_N": int,
                "subcommand": str, "figure": int}


def _parse_pairs(text: str) -> dict:
    """Parse flat ``key = value`` lines (``#`` comments allowed; ``eta`` sets ``g/J``)."""
    raw = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise CCATrapError(f"config line {n}: expected 'key = value'")
        raw[key.strip().replace("-", "_")] = value.strip()
    out = {}
    for key, value in raw.items():
        if key == "etas":
            out["etas"] = tuple(float(v) for v in value.split(",") if v.strip())
        elif key == "eta":
            continue
        elif key in _FIELD_TYPES:
            out[key] = _FIELD_TYPES[key](value)
        else:
            raise CCATrapError(f"unknown config key {key!r}")
    if "eta" in raw:
        out["g"] = float(raw["eta"]) * out.get("J", 1.0)
    return out


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--J", type=float, default=None, help="hopping rate (default 1)")
    grp = common.add_mutually_exclusive_group()
    grp.add_argument("--g", type=float, default=None, help="atom-cavity coupling")
    grp.add_argument("--eta", type=float, default=None, help="coupling ratio g/J")
    common.add_argument("--etas", type=str, default=None, help="comma-separated eta list")
    common.add_argument("--tmin", type=float, default=None, help="first time, as J*t")
    common.add_argument("--tmax", type=float, default=None, help="last time, as J*t")
    common.add_argument("--tsteps", type=int, default=None, help="number of time samples")
    common.add_argument("--window", type=int, default=None, help="site half-width X")
    common.add_argument("--tol", type=float, default=None, help="absolute quadrature tolerance")
    common.add_argument("--out", type=str, default=None, help="output directory")
    common.add_argument("--config", type=str, default=None, help="key = value config file")
    common.add_argument("--eps-c", dest="eps_c", type=float, default=None,
                        help="threshold level for the localization metrics")
    common.add_argument("--oracle-N", dest="oracle_N", type=int, default=None,
                        help="ring size for the exact-diagonalisation check")

    parser = argparse.ArgumentParser(
        prog="ccatrap",
        description="Atom emission into a coupled-cavity array.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("spectrum", parents=[common], help="bound energies and weights per eta")
    sub.add_parser("emit", parents=[common], help="atomic amplitude trace")
    sub.add_parser("field", parents=[common], help="photon amplitude frames and heatmap")
    sub.add_parser("localization", parents=[common], help="localization metrics sweep")
    sub.add_parser("thresholds", parents=[common], help="coupling thresholds")
    sub.add_parser("validate", parents=[common], help="compare with exact diagonalisation")
    fig = sub.add_parser("figure", parents=[common], help="preset figure data")
    fig.add_argument("number", type=int, choices=(2, 3, 4, 5))
    return parser


_FIGURE_DEFAULTS = {
    2: {"etas": FIG2_ETAS, "tmin": 0.0, "tmax": 100.0, "tsteps": 1001},
    3: {"etas": FIG3_ETAS, "tmin": 0.0, "tmax": 100.0, "tsteps": 201, "window": 120},
    4: {"etas": ()},
    5: {"etas": FIG5_ETAS, "tmin": 80.0, "tmax": 100.0, "tsteps": 401, "window": 10},
}


def config_from_args(argv) -> RunConfig:
    """Parse ``argv`` into a :class:`RunConfig` (config file first, flags override)."""
    ns = _build_parser().parse_args(argv)
    values = {}
    if ns.config:
        values.update(_parse_pairs(Path(ns.config).read_text()))
    values["subcommand"] = ns.subcommand
    if ns.subcommand == "figure":
        values["figure"] = ns.number
        for k, v in _FIGURE_DEFAULTS[ns.number].items():
            values.setdefault(k, v)
    for key in ("J", "g", "tmin", "tmax", "tsteps", "window", "tol", "out", "eps_c", "oracle_N"):
        v = getattr(ns, key)
        if v is not None:
            values[key] = v
    if ns.eta is not None:
        values["g"] = ns.eta * values.get("J", 1.0)
    if ns.etas is not None:
        values["etas"] = tuple(float(v) for v in ns.etas.split(",") if v.strip())
    return RunConfig(**values)


def _meta(cfg: RunConfig, **extra) -> dict:
    meta = {"tool": f"ccatrap {__version__}", "subcommand": cfg.subcommand,
            "J": repr(cfg.J), "g": repr(cfg.g), "eta": repr(cfg.g / cfg.J)}
    meta.update(extra)
    return meta


class _Run:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.out = Path(cfg.out)
        self.q = QuadratureSpec(tol=cfg.tol)
        self.integrals = []
        self.files = []
        self.summary = {}

    def _record(self, label, trace=None, frames=()):
        if trace is not None:
            for d in trace.diagnostics:
                self.integrals.append({"what": f"{label}:alpha_u", **d})
        for fr in frames:
            self.integrals.append({"what": f"{label}:psi_u", "t": fr.t,
                                   "route": "quadrature", "error": fr.error})

    def _csv(self, name, columns, **meta):
        path = write_csv(self.out / name, columns, _meta(self.cfg, **meta))
        self.files.append(path.name)
        return path

    def _heatmap(self, name, frames):
        pgm, side = export_heatmap(frames, self.out / name)
        self.files.extend([pgm.name, side.name])

    def etas(self, fallback):
        return self.cfg.etas or fallback

    def spectrum(self):
        etas = np.array(self.etas((self.cfg.g / self.cfg.J,)), dtype=float)
        rows = {"eta": etas, "omega_plus": [], "omega_minus": [], "rho": [], "p_b": [],
                "norm_N": []}
        for eta in etas:
            p = ModelParams.from_eta(eta, self.cfg.J)
            wp, wm = bound_energies(p)
            bs = bound_state(p)
            rows["omega_plus"].append(wp)
            rows["omega_minus"].append(wm)
            rows["rho"].append(bs.rho)
            rows["p_b"].append(bs.p_b)
            rows["norm_N"].append(bs.norm_N)
        self._csv("spectrum.csv", {k: np.asarray(v, dtype=float) for k, v in rows.items()})
        self.summary["rows"] = int(etas.size)

    def _trace_columns(self, p, trace):
        return {
            "Jt": trace.times * p.J,
            "alpha_u_re": trace.alpha_u.real,
            "alpha_u_im": trace.alpha_u.imag,
            "alpha_b": trace.alpha_b,
            "alpha_re": trace.alpha.real,
            "alpha_im": trace.alpha.imag,
            "p_e": trace.p_e,
            "alpha_markov": np.asarray(alpha_markov(p, trace.times), dtype=float),
        }

    def emit(self):
        p = self.cfg.params
        trace, _ = evolve(p, self.cfg.times, 0, self.q, with_field=False)
        self._record("emit", trace)
        self._csv("emit.csv", self._trace_columns(p, trace))
        self.summary["p_e_final"] = float(trace.p_e[-1])

    def _field(self, p, times, window, stem):
        trace, frames = evolve(p, times, window, self.q)
        self._record(stem, trace, frames)
        xs = np.concatenate([fr.x for fr in frames])
        cols = {
            "Jt": np.repeat([fr.t * p.J for fr in frames], [fr.x.size for fr in frames]),
            "x": xs,
            "psi_u_re": np.concatenate([fr.psi_u.real for fr in frames]),
            "psi_u_im": np.concatenate([fr.psi_u.imag for fr in frames]),
            "psi_b_re": np.concatenate([fr.psi_b.real for fr in frames]),
            "psi_b_im": np.concatenate([fr.psi_b.imag for fr in frames]),
            "p_x": np.concatenate([fr.p_x for fr in frames]),
        }
        self._csv(f"{stem}.csv", cols)
        self._heatmap(f"{stem}.pgm", frames)
        return trace, frames

    def field(self):
        p = self.cfg.params
        trace, frames = self._field(p, self.cfg.times, self.cfg.window, "field")
        self._csv("emit.csv", self._trace_columns(p, trace))
        self.summary["max_p_x"] = float(max(fr.p_x.max() for fr in frames))

    def _localization_rows(self, etas):
        etas = np.asarray(etas, dtype=float)
        mets = [localization_metrics(ModelParams.from_eta(e, self.cfg.J)) for e in etas]
        wp = np.array([bound_energies(ModelParams.from_eta(e))[0] for e in etas])
        return {
            "eta": etas,
            "A": np.array([m.A for m in mets]),
            "lambda": np.array([m.lam for m in mets]),
            "eps_floc": np.array([m.eps_floc for m in mets]),
            "eps_atr": np.array([m.eps_atr for m in mets]),
            "omega_plus_minus_2J": wp - 2.0,
        }

    def localization(self):
        rows = self._localization_rows(self.etas(_sweep_etas()))
        self._csv("localization.csv", rows)
        self.summary["rows"] = int(rows["eta"].size)

    def thresholds(self):
        report = {
            "eps_c": self.cfg.eps_c,
            "floc": threshold("floc", self.cfg.eps_c),
            "atr": threshold("atr", self.cfg.eps_c),
        }
        (self.out / "thresholds.json").write_text(json.dumps(report, indent=2) + "\n")
        self.files.append("thresholds.json")
        self.summary.update(report)
        print(f"eps_c={report['eps_c']:g}  floc: eta*={report['floc']:.6f}  "
              f"atr: eta*={report['atr']:.6f}")

    def validate(self):
        rep = oracle_validate(self.cfg.params, self.cfg.oracle_N, self.cfg.times,
                              self.cfg.window, q=self.q)
        doc = rep.as_dict()
        (self.out / "validate.json").write_text(json.dumps(doc, indent=2) + "\n")
        self.files.append("validate.json")
        self.summary.update(doc)
        print(f"max|alpha-alpha_N|={rep.max_alpha_dev:.3e}  "
              f"max|psi-psi_N|={rep.max_psi_dev:.3e}  {'PASS' if rep.passed else 'FAIL'}")
        return EXIT_OK if rep.passed else EXIT_VALIDATION

    def figure(self):
        n = self.cfg.figure
        times = self.cfg.times
        if n == 2:
            cols = {"Jt": times * self.cfg.J}
            for eta in self.etas(FIG2_ETAS):
                p = ModelParams.from_eta(eta, self.cfg.J)
                trace, _ = evolve(p, times, 0, self.q, with_field=False)
                self._record(f"fig2_eta{eta:g}", trace)
                cols[f"p_e_eta{eta:g}"] = trace.p_e
            self._csv("fig2.csv", cols)
        elif n == 3:
            for eta in self.etas(FIG3_ETAS):
                p = ModelParams.from_eta(eta, self.cfg.J)
                self._field(p, times, self.cfg.window, f"fig3_eta{eta:g}")
                t_snap = FIG3_SNAPSHOTS.get(eta, 95.5)
                half = int(np.ceil(2.0 * t_snap)) + 10
                _, (fr,) = evolve(p, [t_snap / self.cfg.J], half, self.q)
                self._record(f"fig3_snapshot_eta{eta:g}", None, [fr])
                self._csv(f"fig3_snapshot_eta{eta:g}.csv", {"x": fr.x, "p_x": fr.p_x},
                          Jt=format_float(t_snap))
        elif n == 4:
            rows = self._localization_rows(self.etas(_sweep_etas()))
            self._csv("fig4.csv", {k: rows[k] for k in
                                   ("eta", "eps_floc", "eps_atr", "omega_plus_minus_2J")})
        elif n == 5:
            for eta in self.etas(FIG5_ETAS):
                p = ModelParams.from_eta(eta, self.cfg.J)
                self._field(p, times, self.cfg.window, f"fig5_eta{eta:g}")
        self.summary["figure"] = n

    def quadrature_summary(self):
        errs = [d["error"] for d in self.integrals if d.get("route") == "quadrature"]
        return {
            "requested_tol": self.cfg.tol,
            "count": len(self.integrals),
            "max_error": max(errs) if errs else 0.0,
            "integrals": self.integrals,
        }


def run(argv=None) -> int:
    """Execute one CLI invocation and return its exit code."""
    try:
        cfg = config_from_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (CCATrapError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    start = time.perf_counter()
    try:
        Path(cfg.out).mkdir(parents=True, exist_ok=True)
        probe = Path(cfg.out) / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        print(f"error: output directory {cfg.out!r} is not writable: {exc}", file=sys.stderr)
        return EXIT_IO

    runner = _Run(cfg)
    code, message = EXIT_OK, None
    try:
        result = getattr(runner, cfg.subcommand)()
        if isinstance(result, int):
            code = result
    except (QuadratureError, ConvergenceError) as exc:
        code, message = EXIT_NUMERICAL, str(exc)
    except (CCATrapError, ValueError) as exc:
        code, message = EXIT_DOMAIN, str(exc)
    except OSError as exc:
        code, message = EXIT_IO, str(exc)
    if message:
        print(f"error: {message}", file=sys.stderr)
    summary = dict(runner.summary, files=runner.files, quadrature=runner.quadrature_summary())
    try:
        write_manifest(cfg, summary, Path(cfg.out) / "manifest.json",
                       wall_time=time.perf_counter() - start, exit_code=code, error=message)
    except OSError as exc:
        print(f"error: cannot write manifest: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
