"""Command-line front end: flat config, CSV output, deterministic runs.

Boundary units are ordinary frequencies: GHz for delta0/epsilon0/omega0/eta
and GHz/ns for the chirp rate; times are ns.  Everything is converted to
angular rates (times 2*pi) before touching the physics modules, and
converted back for output.  Exit codes: 0 success, 2 config error,
3 numerical failure.
"""

import argparse
import math
import sys
from dataclasses import dataclass, fields

import numpy as np

from .analysis import (
    BACKEND_TAGS,
    bloch_siegert_scan,
    compare,
    fig3_preset,
    lz_sweep,
    p_x,
    run_backends,
    shalibo_preset,
)
from .chirp import build_grid, detuning_at, omega_at
from .errors import ConfigError, IntegrationError
from .integrate import IntegratorConfig

__all__ = ["RunConfig", "main"]

_TWO_PI = 2.0 * math.pi
_ALL_BACKENDS = ("exact", "rwa", "magnus1", "magnus2")

_FLOAT_KEYS = {
    "delta0",
    "epsilon0",
    "omega0",
    "alpha",
    "eta",
    "rel_tol",
    "abs_tol",
    "max_step",
    "initial_step",
}
_INT_KEYS = {"n_periods", "scan_periods"}
_FLOAT_LIST_KEYS = {"initial_state", "alphas", "omega0s"}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run parameters, in boundary units (GHz, GHz/ns, ns).

    omega0 and n_periods stay None until some layer provides them; the
    subcommands that need them complain by field name.
    """

    delta0: float = None
    omega0: float = None
    eta: float = None
    n_periods: int = None
    epsilon0: float = 0.0
    alpha: float = 0.0
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    initial_step: float = 1e-2
    backends: tuple = _ALL_BACKENDS
    initial_state: tuple = (-1.0, 0.0, 0.0)
    alphas: tuple = ()
    omega0s: tuple = ()
    scan_periods: int = 1500
    out: str = None

    def __post_init__(self):
        if len(self.backends) == 0:
            raise ConfigError("at least one backend is required")
        for name in self.backends:
            if name not in _ALL_BACKENDS:
                raise ConfigError(
                    f"unknown backend {name!r}; choose from {', '.join(_ALL_BACKENDS)}"
                )
        if len(self.initial_state) != 3:
            raise ConfigError("initial_state needs exactly three components")
        if math.hypot(*self.initial_state) > 1.0 + 1e-9:
            raise ConfigError("initial_state must satisfy |r| <= 1")

    def require(self, *names):
        for name in names:
            if getattr(self, name) is None:
                raise ConfigError(f"missing required field: {name}")

    def tls(self):
        self.require("delta0")
        from .chirp import TlsParams

        return TlsParams(
            delta0=_TWO_PI * self.delta0, epsilon0=_TWO_PI * self.epsilon0
        )

    def drive(self):
        self.require("omega0", "eta", "n_periods")
        from .chirp import ChirpDrive

        return ChirpDrive(
            omega0=_TWO_PI * self.omega0,
            alpha=_TWO_PI * self.alpha,
            eta=_TWO_PI * self.eta,
            n_periods=self.n_periods,
        )

    def integrator(self):
        return IntegratorConfig(
            rel_tol=self.rel_tol,
            abs_tol=self.abs_tol,
            max_step=self.max_step,
            initial_step=self.initial_step,
        )


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_LIST_KEYS:
            if raw == "":
                return ()
            return tuple(float(part) for part in raw.split(","))
        if key == "backends":
            return tuple(part.strip() for part in raw.split(",") if part.strip())
        if key == "out":
            return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from None
    raise ConfigError(f"unknown config key: {key}")


def _read_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                stripped = line.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                if "=" not in stripped:
                    raise ConfigError(
                        f"{path}:{lineno}: expected 'key = value', got {stripped!r}"
                    )
                key, _, raw = stripped.partition("=")
                key = key.strip()
                values[key] = _parse_value(key, raw)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return values


def _preset_values(name: str) -> dict:
    if name == "fig3":
        preset = fig3_preset()
    elif name == "shalibo":
        preset = shalibo_preset()
    else:
        raise ConfigError(f"unknown preset {name!r}")
    inv = 1.0 / _TWO_PI
    return {
        "delta0": preset.tls.delta0 * inv,
        "epsilon0": preset.tls.epsilon0 * inv,
        "omega0": preset.drive.omega0 * inv,
        "alpha": preset.drive.alpha * inv,
        "eta": preset.drive.eta * inv,
        "n_periods": preset.drive.n_periods,
        "rel_tol": preset.cfg.rel_tol,
        "abs_tol": preset.cfg.abs_tol,
        "max_step": preset.cfg.max_step,
        "initial_step": preset.cfg.initial_step,
        "backends": tuple(preset.backends),
        "initial_state": tuple(float(x) for x in preset.r0),
    }


def _resolve_config(args) -> RunConfig:
    values = {}
    if args.preset is not None:
        values.update(_preset_values(args.preset))
    if args.config is not None:
        values.update(_read_config_file(args.config))
    for f in fields(RunConfig):
        cli_value = getattr(args, f.name, None)
        if cli_value is not None:
            values[f.name] = cli_value
    known = {f.name for f in fields(RunConfig)}
    for key in values:
        if key not in known:
            raise ConfigError(f"unknown config key: {key}")
    return RunConfig(**values)


def _dump_lines(rc: RunConfig) -> list:
    lines = []
    for f in fields(RunConfig):
        value = getattr(rc, f.name)
        if value is None:
            continue
        if f.name in _FLOAT_LIST_KEYS:
            if len(value) == 0:
                continue
            text = ",".join(_fmt(x) for x in value)
        elif f.name == "backends":
            text = ",".join(value)
        elif f.name in _FLOAT_KEYS:
            text = _fmt(value)
        else:
            text = str(value)
        lines.append(f"{f.name} = {text}")
    return lines


def _emit(rc: RunConfig, header: str, rows: list, summary: list) -> None:
    """Write the CSV (config echo, header, rows) and the human summary."""
    csv_lines = ["# " + line for line in _dump_lines(rc)]
    csv_lines.append(header)
    csv_lines.extend(rows)
    text = "\n".join(csv_lines) + "\n"
    if rc.out is not None:
        try:
            with open(rc.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {rc.out}: {exc}") from None
        for line in summary:
            print(line)
        print(f"wrote {rc.out} ({len(rows)} rows)")
    else:
        sys.stdout.write(text)
        for line in summary:
            print(line, file=sys.stderr)


def cmd_simulate(rc: RunConfig) -> int:
    rc.require("delta0", "omega0", "eta", "n_periods")
    tls = rc.tls()
    drive = rc.drive()
    grid = build_grid(drive)
    preset_like = _SimulateBundle(rc, tls, drive)
    traces = run_backends(preset_like, grid)

    rows = []
    inv = 1.0 / _TWO_PI
    for name in rc.backends:
        trace = traces[name]
        px = p_x(trace.r)
        for j in range(trace.times.shape[0]):
            t = float(trace.times[j])
            rows.append(
                ",".join(
                    (
                        trace.method,
                        str(j),
                        _fmt(t),
                        _fmt(omega_at(drive, t) * inv),
                        _fmt(detuning_at(tls, drive, t) * inv),
                        _fmt(trace.r[j, 0]),
                        _fmt(trace.r[j, 1]),
                        _fmt(trace.r[j, 2]),
                        _fmt(float(px[j])),
                    )
                )
            )

    summary = []
    names = list(rc.backends)
    for i in range(len(names)):
        for k in range(i + 1, len(names)):
            report = compare(traces[names[i]], traces[names[k]])
            summary.append(
                f"P_x |{report.methods[0]} - {report.methods[1]}|: "
                f"max {report.max_abs_px_error:.3e}, "
                f"mean {report.mean_abs_px_error:.3e}"
            )
    _emit(rc, "method,j,t,omega_t,delta_t,r_x,r_y,r_z,p_x", rows, summary)
    return 0


class _SimulateBundle:
    """Adapter giving run_backends the preset-shaped fields it reads."""

    def __init__(self, rc: RunConfig, tls, drive):
        self.tls = tls
        self.drive = drive
        self.r0 = np.asarray(rc.initial_state, dtype=float)
        self.backends = rc.backends
        self.cfg = rc.integrator()


def cmd_lz_sweep(rc: RunConfig) -> int:
    rc.require("delta0", "eta")
    if len(rc.alphas) == 0:
        raise ConfigError("missing required field: alphas")
    tls = rc.tls()
    points = lz_sweep(
        tls,
        _TWO_PI * rc.eta,
        [_TWO_PI * a for a in rc.alphas],
        rc.integrator(),
    )
    rows = [
        ",".join(
            (
                _fmt(alpha_ghz),
                _fmt(pt.p_exact),
                _fmt(pt.p_formula),
                _fmt(pt.abs_err),
            )
        )
        for alpha_ghz, pt in zip(rc.alphas, points)
    ]
    worst = max(pt.abs_err for pt in points)
    summary = [f"largest |exact - formula| across sweep: {worst:.3e}"]
    _emit(rc, "alpha,p_exact,p_formula,abs_err", rows, summary)
    return 0


def cmd_bloch_siegert(rc: RunConfig) -> int:
    rc.require("delta0", "eta")
    tls = rc.tls()
    if len(rc.omega0s) > 0:
        omega0s = np.array(sorted(rc.omega0s), dtype=float)
    else:
        # default grid: 11 points across +-0.75 eta around the splitting
        omega0s = rc.delta0 + rc.eta * np.linspace(-0.75, 0.75, 11)
    scan = bloch_siegert_scan(
        tls,
        _TWO_PI * rc.eta,
        _TWO_PI * omega0s,
        n_periods=rc.scan_periods,
        cfg=rc.integrator(),
        backends=rc.backends,
    )
    inv = 1.0 / _TWO_PI
    rows = []
    summary = []
    for name in rc.backends:
        tag = BACKEND_TAGS[name]
        peak = scan.peaks[tag] * inv
        shift = peak - rc.delta0
        rows.append(",".join((tag, _fmt(peak), _fmt(shift))))
        summary.append(f"{tag} peak at {peak:.9f} GHz (shift {shift:+.3e} GHz)")
    _emit(rc, "method,omega0_peak,peak_shift", rows, summary)
    return 0


def _add_common_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--preset", choices=("fig3", "shalibo"), default=None)
    sub.add_argument("--config", metavar="PATH", default=None)
    sub.add_argument("--out", metavar="PATH", default=None)
    sub.add_argument(
        "--dump-config",
        metavar="PATH",
        default=None,
        help="write the resolved flat config to PATH and exit",
    )
    sub.add_argument("--delta0", type=float, default=None, help="splitting, GHz")
    sub.add_argument("--epsilon0", type=float, default=None, help="static bias, GHz")
    sub.add_argument("--omega0", type=float, default=None, help="initial drive frequency, GHz")
    sub.add_argument("--alpha", type=float, default=None, help="chirp rate, GHz/ns")
    sub.add_argument("--eta", type=float, default=None, help="drive amplitude, GHz")
    sub.add_argument("--n-periods", dest="n_periods", type=int, default=None)
    sub.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    sub.add_argument("--abs-tol", dest="abs_tol", type=float, default=None)
    sub.add_argument("--max-step", dest="max_step", type=float, default=None, help="ns")
    sub.add_argument("--initial-step", dest="initial_step", type=float, default=None, help="ns")
    sub.add_argument(
        "--backends",
        type=lambda raw: _parse_value("backends", raw),
        default=None,
        help="comma list from: exact,rwa,magnus1,magnus2",
    )
    sub.add_argument(
        "--initial-state",
        dest="initial_state",
        type=lambda raw: _parse_value("initial_state", raw),
        default=None,
        help="comma triple r_x,r_y,r_z",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chirptls",
        description="Chirped two-level system: stroboscopic and exact propagation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="trace all backends over the period grid")
    _add_common_arguments(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_lz = sub.add_parser("lz-sweep", help="exact vs closed-form crossing probability")
    _add_common_arguments(p_lz)
    p_lz.add_argument(
        "--alphas",
        type=lambda raw: _parse_value("alphas", raw),
        default=None,
        help="comma list of chirp rates, GHz/ns",
    )
    p_lz.set_defaults(func=cmd_lz_sweep)

    p_bs = sub.add_parser("bloch-siegert", help="resonance-peak scan per backend")
    _add_common_arguments(p_bs)
    p_bs.add_argument(
        "--omega0s",
        type=lambda raw: _parse_value("omega0s", raw),
        default=None,
        help="comma list of drive frequencies, GHz",
    )
    p_bs.add_argument(
        "--scan-periods", dest="scan_periods", type=int, default=None
    )
    p_bs.set_defaults(func=cmd_bloch_siegert)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        rc = _resolve_config(args)
        if args.dump_config is not None:
            text = "\n".join(_dump_lines(rc)) + "\n"
            try:
                with open(args.dump_config, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(text)
            except OSError as exc:
                raise ConfigError(
                    f"cannot write {args.dump_config}: {exc}"
                ) from None
            return 0
        return args.func(rc)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IntegrationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
