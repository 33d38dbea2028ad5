"""Batch command-line front end.

Subcommands: spectrum, transitions, resonance, pulse, quasiclassical,
validate.  Every option can come from the command line or from a plain
``key=value`` config file (``--config``); flags override the file.
Outputs are deterministic: CSV with a mandatory header and
17-significant-digit floats, or JSON with sorted keys and round-trip
exact numbers.

Exit codes: 0 success; 2 invalid configuration; 3 unitarity failure in
a transition table (internal defect signal); 4 resonance root not
found; 5 quadrature failure.  Parameter sweeps (``--sweep``) on the
report-style subcommands always exit 0 and record per-point status
instead.  The only environment variable consulted is
``CYCLORES_THREADS`` (sweep worker count, default 1).
"""

import argparse
import concurrent.futures
import json
import math
import os
import sys
from dataclasses import replace

import numpy as np

from .constants import C_LIGHT, E_CHARGE, HBAR, M_ELECTRON, M_PROTON
from .core import (
    FieldConfig,
    ParticleState,
    classify_doppler,
    derived_scales,
    landau_energy,
    resonant_momentum,
    validity_report,
)
from .errors import NoRootError, QuadratureError
from .pulse import EnvelopeKind, PulseEnvelope, asymptotic_displacement, drift_integral
from .transitions import peak_compare, transition_table, zeta_from_amplitude

_SPECIES = {
    "electron": (M_ELECTRON, E_CHARGE, -1),
    "proton": (M_PROTON, E_CHARGE, +1),
}

# dest -> (flag, type, help); every option is optional at parse time and
# resolved against the config file and per-command defaults afterwards.
_OPTS = {
    "species": ("--species", str, "particle preset: electron or proton (default electron)"),
    "mass": ("--mass", float, "rest mass in g (overrides the preset)"),
    "charge": ("--charge", float, "charge magnitude in esu (overrides the preset)"),
    "charge_sign": ("--charge-sign", int, "charge sign +1 or -1 (overrides the preset)"),
    "pz": ("--pz", float, "longitudinal momentum in g*cm/s (default 0)"),
    "py": ("--py", float, "transverse generalized momentum in g*cm/s (default 0)"),
    "s": ("--s", int, "Landau index"),
    "s_max": ("--s-max", int, "largest Landau index in the spectrum table"),
    "H0": ("--H0", float, "magnetic field strength in G"),
    "n_index": ("--n-index", float, "refraction index of the medium"),
    "omega": ("--omega", float, "wave angular frequency in rad/s"),
    "g": ("--g", int, "circular polarization sign +1 or -1"),
    "A_bar": ("--A-bar", float, "average vector-potential amplitude in G*cm"),
    "T": ("--T", float, "coherent interaction time in s"),
    "zeta": ("--zeta", float, "displacement parameter zeta"),
    "envelope": ("--envelope", str, "sampled envelope CSV path (tau_seconds,A_gauss_cm)"),
    "envelope_kind": ("--envelope-kind", str, "parametric envelope: flat_top or gaussian"),
    "A_peak": ("--A-peak", float, "peak/plateau envelope amplitude in G*cm"),
    "duration": ("--duration", float, "envelope duration in s"),
    "ramp": ("--ramp", float, "flat-top ramp time in s (default duration/100)"),
    "t_start": ("--t-start", float, "envelope start time in s (default 0)"),
    "grid_points": ("--grid-points", int, "output times across the envelope (default 129)"),
    "delta_e": ("--delta-e", float, "anticipated total energy exchange in erg"),
    "threshold": ("--threshold", float, "validity threshold (default 0.01)"),
}

_SUBCOMMAND_OPTS = {
    "spectrum": ["species", "mass", "charge", "charge_sign", "pz", "py", "s_max", "H0"],
    "transitions": [
        "species", "mass", "charge", "charge_sign", "pz", "py", "s",
        "H0", "n_index", "omega", "g", "zeta", "A_bar", "T", "envelope",
    ],
    "resonance": [
        "species", "mass", "charge", "charge_sign", "py", "s",
        "H0", "n_index", "omega", "g",
    ],
    "pulse": [
        "species", "mass", "charge", "charge_sign", "pz", "py", "s",
        "H0", "n_index", "omega", "g",
        "envelope", "envelope_kind", "A_peak", "duration", "ramp", "t_start",
        "grid_points",
    ],
    "quasiclassical": ["s", "zeta"],
    "validate": [
        "species", "mass", "charge", "charge_sign", "pz", "py", "s",
        "H0", "n_index", "omega", "g", "zeta", "delta_e", "threshold",
    ],
}

_SWEEPABLE = {"resonance", "quasiclassical", "validate"}


class _ConfigError(ValueError):
    pass


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="cyclores",
        description="Cyclotron-resonance observables in a refractive medium "
        "(CGS-Gaussian units throughout).",
    )
    sub = parser.add_subparsers(dest="command")
    for name, dests in _SUBCOMMAND_OPTS.items():
        sp = sub.add_parser(name)
        for dest in dests:
            flag, typ, help_text = _OPTS[dest]
            sp.add_argument(flag, dest=dest, type=typ, default=None, help=help_text)
        sp.add_argument("--config", type=str, default=None,
                        help="key=value config file; flags override it")
        sp.add_argument("--output", type=str, default=None,
                        help="output path (default: stdout)")
        sp.add_argument("--format", dest="fmt", type=str, default=None,
                        choices=("csv", "json"), help="output format")
        if name in _SWEEPABLE:
            sp.add_argument(
                "--sweep", action="append", nargs="+", metavar="ARG", default=None,
                help="sweep axis: NAME MIN MAX COUNT [linear|log]; repeatable",
            )
    return parser


def _load_config(path):
    values = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise _ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
                key, _, value = line.partition("=")
                values[key.strip()] = value.strip()
    except OSError as exc:
        raise _ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


class _Resolver:
    """Merges flag values over config-file values over defaults."""

    def __init__(self, args, config):
        self.args = args
        self.config = config
        unknown = set(config) - set(_OPTS)
        if unknown:
            raise _ConfigError(f"unknown config keys: {sorted(unknown)}")

    def get(self, dest, default=None, required=False):
        value = getattr(self.args, dest, None)
        if value is None and dest in self.config:
            typ = _OPTS[dest][1]
            try:
                value = typ(self.config[dest])
            except ValueError as exc:
                raise _ConfigError(f"config key {dest}: {exc}") from exc
        if value is None:
            value = default
        if value is None and required:
            raise _ConfigError(f"missing required option {_OPTS[dest][0]}")
        return value

    def values(self, dests, defaults=(), required=()):
        default_map = dict(defaults)
        out = {}
        for dest in dests:
            out[dest] = self.get(
                dest, default=default_map.get(dest), required=dest in required
            )
        return out


def _particle_from(vals, s=None, pz=None):
    species = vals.get("species") or "electron"
    if species not in _SPECIES:
        raise _ConfigError(f"unknown species {species!r}; use electron or proton")
    mass, charge, sign = _SPECIES[species]
    if vals.get("mass") is not None:
        mass = vals["mass"]
    if vals.get("charge") is not None:
        charge = vals["charge"]
    if vals.get("charge_sign") is not None:
        sign = vals["charge_sign"]
    return ParticleState(
        mass=mass,
        charge=charge,
        charge_sign=sign,
        p_z=pz if pz is not None else vals.get("pz") or 0.0,
        p_y=vals.get("py") or 0.0,
        s=s if s is not None else int(vals.get("s") or 0),
    )


def _field_from(vals, a_bar=0.0, t_coh=0.0):
    return FieldConfig(
        H0=vals["H0"],
        n=vals["n_index"],
        omega=vals["omega"],
        g=int(vals["g"]),
        A_bar=a_bar,
        T=t_coh,
    )


def _fmt_cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _csv_text(header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt_cell(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {key: _jsonable(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(val) for val in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _json_text(payload):
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"


def _emit(text, output):
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _sweep_axes(raw_axes, allowed):
    axes = []
    for tokens in raw_axes:
        if len(tokens) not in (4, 5):
            raise _ConfigError(
                f"--sweep expects NAME MIN MAX COUNT [linear|log], got {tokens!r}"
            )
        name = tokens[0].replace("-", "_")
        if name not in allowed:
            raise _ConfigError(
                f"sweep parameter {tokens[0]!r} is not sweepable here; "
                f"choose from {sorted(allowed)}"
            )
        lo, hi = float(tokens[1]), float(tokens[2])
        count = int(tokens[3])
        scale = tokens[4] if len(tokens) == 5 else "linear"
        if count < 1:
            raise _ConfigError("sweep COUNT must be >= 1")
        if scale not in ("linear", "log"):
            raise _ConfigError(f"sweep scale must be linear or log, got {scale!r}")
        if scale == "log" and (lo <= 0.0 or hi <= 0.0):
            raise _ConfigError("log sweeps need positive MIN and MAX")
        if count == 1:
            grid = np.array([lo])
        elif scale == "linear":
            grid = np.linspace(lo, hi, count)
        else:
            grid = np.geomspace(lo, hi, count)
        if _OPTS[name][1] is int:
            values = [int(round(v)) for v in grid]
        else:
            values = [float(v) for v in grid]
        axes.append((name, values))
    return axes


def _run_sweep(axes, vals, compute, output, fmt):
    names = [name for name, _ in axes]
    grids = [values for _, values in axes]
    points = [()]
    for values in grids:
        points = [prev + (v,) for prev in points for v in values]

    def run_point(point):
        local = dict(vals)
        local.update(dict(zip(names, point)))
        try:
            result = compute(local)
            status = "ok"
        except NoRootError:
            result = {}
            status = "no_root"
        except (ValueError, QuadratureError) as exc:
            result = {}
            status = f"error: {exc}" if fmt == "json" else "error"
        return point, status, result

    workers = max(1, int(os.environ.get("CYCLORES_THREADS", "1")))
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_point, points))
    else:
        outcomes = [run_point(pt) for pt in points]

    result_keys = sorted({key for _, _, result in outcomes for key in result})
    if fmt == "csv":
        header = names + ["status"] + result_keys
        rows = [
            list(point) + [status] + [result.get(key) for key in result_keys]
            for point, status, result in outcomes
        ]
        _emit(_csv_text(header, rows), output)
    else:
        payload = [
            {**dict(zip(names, point)), "status": status,
             **{key: result.get(key) for key in result_keys}}
            for point, status, result in outcomes
        ]
        _emit(_json_text(payload), output)
    return 0


def cmd_spectrum(args, config):
    res = _Resolver(args, config)
    vals = res.values(
        _SUBCOMMAND_OPTS["spectrum"],
        defaults={"pz": 0.0, "py": 0.0},
        required=("H0", "s_max"),
    )
    particle = _particle_from(vals, s=0)
    h0 = vals["H0"]
    if vals["s_max"] < 0:
        raise _ConfigError("s_max must be non-negative")
    rest = particle.mass * C_LIGHT * C_LIGHT
    rows = []
    for s in range(vals["s_max"] + 1):
        energy = landau_energy(replace(particle, s=s), h0)
        rows.append([s, energy, energy / rest])
    fmt = args.fmt or "csv"
    if fmt == "csv":
        _emit(_csv_text(["s", "E_erg", "E_over_mc2"], rows), args.output)
    else:
        payload = {"rows": [
            {"s": s, "E_erg": e, "E_over_mc2": ratio} for s, e, ratio in rows
        ]}
        _emit(_json_text(payload), args.output)
    return 0


def _resolve_zeta_source(res, vals, field, scales):
    provided = [
        vals.get("zeta") is not None,
        vals.get("A_bar") is not None or vals.get("T") is not None,
        vals.get("envelope") is not None,
    ]
    if sum(provided) != 1:
        raise _ConfigError(
            "provide exactly one zeta source: --zeta, or --A-bar with --T, "
            "or --envelope"
        )
    if vals.get("zeta") is not None:
        if vals["zeta"] < 0.0:
            raise _ConfigError("zeta must be non-negative")
        return vals["zeta"]
    if vals.get("envelope") is not None:
        env = PulseEnvelope.from_csv(vals["envelope"])
        states = drift_integral(env, field, scales, [env.support[1]])
        return asymptotic_displacement(states, scales.l_B)
    if vals.get("A_bar") is None or vals.get("T") is None:
        raise _ConfigError("the amplitude path needs both --A-bar and --T")
    return zeta_from_amplitude(
        replace(field, A_bar=vals["A_bar"], T=vals["T"]), scales
    )


def cmd_transitions(args, config):
    res = _Resolver(args, config)
    vals = res.values(
        _SUBCOMMAND_OPTS["transitions"],
        defaults={"pz": 0.0, "py": 0.0},
        required=("s", "H0", "n_index", "omega", "g"),
    )
    particle = _particle_from(vals)
    field = _field_from(vals, a_bar=vals.get("A_bar") or 0.0, t_coh=vals.get("T") or 0.0)
    scales = derived_scales(particle, field)
    zeta = _resolve_zeta_source(res, vals, field, scales)
    table = transition_table(particle.s, zeta, field, scales)

    rows = []
    cumulative = 0.0
    for record in table.records:
        cumulative += record.w
        rows.append([
            record.s_prime, record.w, record.photons,
            record.delta_pz, record.delta_E, cumulative,
        ])
    fmt = args.fmt or "csv"
    if fmt == "csv":
        text = _csv_text(
            ["s_prime", "w", "photons", "delta_pz", "delta_E", "cumulative"], rows
        )
    else:
        text = _json_text({
            "s": table.s,
            "zeta": table.zeta,
            "total": table.total,
            "cutoff_meta": {
                "s_prime_min": table.cutoff_meta.s_prime_min,
                "s_prime_max": table.cutoff_meta.s_prime_max,
                "n_dropped": table.cutoff_meta.n_dropped,
                "tail_estimate": table.cutoff_meta.tail_estimate,
            },
            "rows": [
                {"s_prime": r.s_prime, "w": r.w, "photons": r.photons,
                 "delta_pz": r.delta_pz, "delta_E": r.delta_E}
                for r in table.records
            ],
        })
    _emit(text, args.output)
    if not (1.0 - 1e-8 <= table.total <= 1.0):
        print(
            f"unitarity check failed: total probability {table.total!r}",
            file=sys.stderr,
        )
        return 3
    return 0


def _compute_resonance(vals):
    particle = _particle_from(vals)
    field = _field_from(vals)
    p_z = resonant_momentum(field, particle)
    scales = derived_scales(replace(particle, p_z=p_z), field)
    regime = classify_doppler(scales, field.g)
    residual = (scales.omega_prime - field.g * scales.Omega) / field.omega
    return {
        "p_z": p_z,
        "v_z_over_c": scales.v_z / C_LIGHT,
        "regime": regime.value,
        "residual": residual,
    }


def cmd_resonance(args, config):
    res = _Resolver(args, config)
    axes = (
        _sweep_axes(args.sweep, _float_dests(_SUBCOMMAND_OPTS["resonance"]))
        if args.sweep else []
    )
    swept = {name for name, _ in axes}
    vals = res.values(
        _SUBCOMMAND_OPTS["resonance"],
        defaults={"py": 0.0},
        required=tuple(r for r in ("H0", "n_index", "omega", "g") if r not in swept),
    )
    fmt = args.fmt or "json"
    if axes:
        return _run_sweep(axes, vals, _compute_resonance, args.output, fmt)
    try:
        result = _compute_resonance(vals)
    except NoRootError as exc:
        payload = {
            "error": "no_root",
            "residual_min": exc.residual_min,
            "residual_max": exc.residual_max,
        }
        _emit(_json_text(payload), args.output)
        return 4
    _emit(_json_text(result), args.output)
    return 0


def _envelope_from(vals):
    if vals.get("envelope") is not None:
        if vals.get("envelope_kind") is not None:
            raise _ConfigError("give either --envelope or --envelope-kind, not both")
        return PulseEnvelope.from_csv(vals["envelope"])
    kind = vals.get("envelope_kind")
    if kind is None:
        raise _ConfigError("an envelope is required: --envelope or --envelope-kind")
    if vals.get("A_peak") is None or vals.get("duration") is None:
        raise _ConfigError("parametric envelopes need --A-peak and --duration")
    t_start = vals.get("t_start") or 0.0
    if kind == "flat_top":
        ramp = vals.get("ramp")
        if ramp is None:
            ramp = vals["duration"] / 100.0
        return PulseEnvelope.flat_top(
            vals["A_peak"], vals["duration"], ramp, t_start=t_start
        )
    if kind == "gaussian":
        return PulseEnvelope.gaussian(vals["A_peak"], vals["duration"], t_start=t_start)
    raise _ConfigError(f"unknown envelope kind {kind!r}; use flat_top or gaussian")


def cmd_pulse(args, config):
    res = _Resolver(args, config)
    vals = res.values(
        _SUBCOMMAND_OPTS["pulse"],
        defaults={"pz": 0.0, "py": 0.0, "grid_points": 129},
        required=("H0", "n_index", "omega", "g"),
    )
    if vals["grid_points"] < 2:
        raise _ConfigError("grid_points must be at least 2")
    particle = _particle_from(vals)
    field = _field_from(vals)
    scales = derived_scales(particle, field)
    env = _envelope_from(vals)
    t0, t1 = env.support
    grid = np.linspace(t0, t1, vals["grid_points"])
    states = drift_integral(env, field, scales, grid)

    rows = [
        [st.tau, st.K.real, st.K.imag, abs(st.K), st.phase_Q] for st in states
    ]
    _emit(_csv_text(["tau", "Kx", "Ky", "absK", "phase_Q"], rows), args.output)

    zeta_eff = asymptotic_displacement(states, scales.l_B)
    summary = {"zeta_eff": zeta_eff, "closed_form_zeta": None, "relative_gap": None}
    if env.kind is EnvelopeKind.FLAT_TOP_RAMPED:
        closed = zeta_from_amplitude(
            replace(field, A_bar=env.mean_amplitude(), T=env.duration), scales
        )
        summary["closed_form_zeta"] = closed
        if closed > 0.0:
            summary["relative_gap"] = abs(zeta_eff - closed) / closed
    sys.stdout.write(_json_text(summary))
    return 0


def _compute_quasiclassical(vals):
    s = int(vals["s"])
    zeta = float(vals["zeta"])
    if zeta < 0.0:
        raise _ConfigError("zeta must be non-negative")
    peak = peak_compare(s, zeta)
    root_s, root_z = math.sqrt(s), math.sqrt(zeta)
    return {
        "predicted_shift": peak.predicted_shift,
        "argmax_shift": peak.argmax_shift,
        "relative_gap": peak.relative_gap,
        "zeta_peak_band": [(root_s - root_z) ** 2, (root_s + root_z) ** 2],
    }


def cmd_quasiclassical(args, config):
    res = _Resolver(args, config)
    axes = _sweep_axes(args.sweep, {"s", "zeta"}) if args.sweep else []
    swept = {name for name, _ in axes}
    vals = res.values(
        _SUBCOMMAND_OPTS["quasiclassical"],
        required=tuple(r for r in ("s", "zeta") if r not in swept),
    )
    fmt = args.fmt or "json"
    if axes:
        return _run_sweep(axes, vals, _compute_quasiclassical, args.output, fmt)
    result = _compute_quasiclassical(vals)
    _emit(_json_text(result), args.output)
    return 0


def _compute_validate(vals):
    particle = _particle_from(vals)
    field = _field_from(vals)
    if vals.get("delta_e") is not None and vals.get("zeta") is not None:
        raise _ConfigError("give at most one of --delta-e and --zeta")
    if vals.get("delta_e") is not None:
        estimate = vals["delta_e"]
    elif vals.get("zeta") is not None:
        # Quasiclassical proxy: peak shift 2 sqrt(s zeta) photons of hbar*omega.
        estimate = 2.0 * math.sqrt(particle.s * vals["zeta"]) * HBAR * field.omega
    else:
        estimate = 0.0
    report = validity_report(
        particle, field, delta_E_estimate=estimate,
        threshold=vals.get("threshold") or 1e-2,
    )
    return {
        "ratio_photon": report.ratio_photon,
        "ratio_exchange": report.ratio_exchange,
        "ratio_landau": report.ratio_landau,
        "holds_photon": report.holds_photon,
        "holds_exchange": report.holds_exchange,
        "holds_landau": report.holds_landau,
        "threshold": report.threshold,
    }


def cmd_validate(args, config):
    res = _Resolver(args, config)
    axes = (
        _sweep_axes(args.sweep, _float_dests(_SUBCOMMAND_OPTS["validate"]))
        if args.sweep else []
    )
    swept = {name for name, _ in axes}
    vals = res.values(
        _SUBCOMMAND_OPTS["validate"],
        defaults={"pz": 0.0, "py": 0.0, "threshold": 1e-2},
        required=tuple(r for r in ("H0", "n_index", "omega", "g") if r not in swept),
    )
    fmt = args.fmt or "json"
    if axes:
        return _run_sweep(axes, vals, _compute_validate, args.output, fmt)
    result = _compute_validate(vals)
    _emit(_json_text(result), args.output)
    return 0


def _float_dests(dests):
    return {d for d in dests if _OPTS[d][1] in (float, int) and d != "charge_sign"}


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "transitions": cmd_transitions,
    "resonance": cmd_resonance,
    "pulse": cmd_pulse,
    "quasiclassical": cmd_quasiclassical,
    "validate": cmd_validate,
}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return 2
    try:
        config = _load_config(args.config) if args.config else {}
        return _DISPATCH[args.command](args, config)
    except QuadratureError as exc:
        print(f"quadrature failure: {exc}", file=sys.stderr)
        return 5
    except NoRootError as exc:
        print(f"no resonance root: {exc}", file=sys.stderr)
        return 4
    except (ValueError, OSError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
