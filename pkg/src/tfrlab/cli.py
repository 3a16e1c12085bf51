"""Command-line front end: ``tfrlab <command> [options]``.

Every invocation prints one JSON line ``{command, status, key_metrics}`` to
standard output and exits with 0 on success, 2 on a validation error and 3
on a numerical failure.  Options may come from flags or from a JSON object
given with ``--config``; flags override the file and unknown keys are
rejected.  Signals are read and written in the binary or CSV formats of
:mod:`tfrlab.io`.
"""

from __future__ import annotations

import argparse
import json
import importlib
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import diagnostics as dg
from . import gabor as gb
from . import io
from . import sampling as sp
from . import selftest
from . import tfr
from . import windows as win
from . import zak as zk
from .errors import NumericalError, TFError, ValidationError
from .signals import FiniteSignal, TimeGrid

# the package re-exports the function ``bargmann`` under the submodule's name
bg = importlib.import_module(".bargmann", __package__)

__all__ = ["main", "run", "build_parser"]

_FACTORIES = {
    "gaussian": win.gaussian,
    "generalized_gaussian": win.generalized_gaussian,
    "box": win.box,
    "sinc": win.sinc,
    "onesided_exp": win.onesided_exp,
    "twosided_exp": win.twosided_exp,
    "sech": win.sech,
    "hermite": win.hermite_window,
    "s0": win.s0_window,
}

_MODULE = {
    "stft": "tfr", "spectrogram": "tfr", "ambiguity": "tfr", "wigner": "tfr", "rihaczek": "tfr",
    "zak": "zak",
    "frame-bounds": "gabor", "dual-window": "gabor", "frame-scan": "gabor", "wexler-raz": "gabor",
    "figa": "gabor",
    "sample-reconstruct": "sampling", "poisson-check": "sampling",
    "bargmann": "bargmann", "hermite": "bargmann",
    "diagnostics": "diagnostics",
}


def _tokens(v) -> list:
    """Flatten flag or config list values; strings may hold comma-separated entries."""
    items = v if isinstance(v, (list, tuple)) else [v]
    out = []
    for x in items:
        out.extend(str(x).replace(",", " ").split() if isinstance(x, str) else [x])
    return out


def _int_list(v):
    return [int(x) for x in _tokens(v)]


def _float_list(v):
    return [float(x) for x in _tokens(v)]


def _complex_list(v):
    return [complex(x[0], x[1]) if isinstance(x, (list, tuple)) else
            complex(x.replace("i", "j")) if isinstance(x, str) else complex(x) for x in _tokens(v)]


# (flag, type, default, help)
_COMMON = [
    ("--window", str, "gaussian", "window kind or JSON descriptor {kind, params}"),
    ("--window-params", str, None, "JSON object of window parameters"),
    ("--L", int, 144, "grid length when no input file is given"),
    ("--dt", float, None, "grid step (default 1/sqrt(L))"),
    ("--input", str, None, "input signal file (binary or CSV)"),
    ("--output", str, None, "output file"),
]

_OPTIONS = {
    "stft": [("--hop", int, 1, "time hop in samples")],
    "spectrogram": [("--hop", int, 1, "time hop in samples")],
    "ambiguity": [("--hop", int, 1, "time hop in samples"),
                  ("--input2", str, None, "second signal (default: the first)")],
    "wigner": [("--input2", str, None, "second signal (default: the first)")],
    "rihaczek": [("--input2", str, None, "second signal (default: the first)")],
    "zak": [("--N", int, None, "cell length in samples (default: round sqrt(L) divisor)")],
    "frame-bounds": [("--a", int, None, "time step in samples"), ("--b", int, None, "frequency step in bins"),
                     ("--shear", int, 0, "lattice shear in bins"),
                     ("--method", str, "auto", "dense, iterative, zak or auto")],
    "dual-window": [("--a", int, None, "time step in samples"), ("--b", int, None, "frequency step in bins"),
                    ("--shear", int, 0, "lattice shear in bins"),
                    ("--tight", bool, False, "return the canonical tight window instead")],
    "frame-scan": [("--a-list", _int_list, None, "time steps (default: all divisors of L)"),
                   ("--b-list", _int_list, None, "frequency steps (default: all divisors of L)"),
                   ("--method", str, "dense", "dense, iterative or zak")],
    "wexler-raz": [("--a", int, None, "time step in samples"), ("--b", int, None, "frequency step in bins"),
                   ("--shear", int, 0, "lattice shear in bins"),
                   ("--dual", str, None, "dual window file (default: canonical dual)")],
    "figa": [("--a", int, None, "time step in samples"), ("--b", int, None, "frequency step in bins"),
             ("--shear", int, 0, "lattice shear in bins"),
             ("--trials", int, 20, "number of random quadruples"), ("--seed", int, 0, "random seed")],
    "sample-reconstruct": [("--samples", str, None, "sample CSV (k,re,im) with JSON sidecar {T, band}"),
                           ("--method", str, "wkns", "wkns, bandpass or s0"),
                           ("--carrier", float, None, "band centre for bandpass"),
                           ("--bandwidth", float, None, "bandwidth (default from the declared band)"),
                           ("--t", _float_list, None, "evaluation times"),
                           ("--t-range", _float_list, None, "lo hi n: evenly spaced evaluation times")],
    "poisson-check": [("--t", float, 0.0, "evaluation point"), ("--K", int, 8, "truncation |k| <= K")],
    "bargmann": [("--z", _complex_list, None, "evaluation points (default: the Fock quadrature grid)"),
                 ("--radius", float, 4.0, "Fock disc radius"), ("--n-radial", int, 96, "radial nodes"),
                 ("--n-angular", int, 128, "angular nodes")],
    "hermite": [("--order", int, 0, "Hermite order n <= 64")],
    "diagnostics": [("--p", _float_list, [1.0, 4.0], "Lieb exponents"),
                    ("--block", int, None, "amalgam block length (default: largest divisor <= sqrt(L))"),
                    ("--half-width", float, 2.0, "half width of the time and frequency sets")],
}

_NO_WINDOW = {"hermite"}


def _spec(command: str):
    opts = list(_OPTIONS[command])
    if command not in _NO_WINDOW:
        opts = _COMMON + opts
    else:
        opts = [o for o in _COMMON if o[0] in ("--L", "--dt", "--output")] + opts
    return opts


def _dest(flag: str) -> str:
    return flag.lstrip("-").replace("-", "_")


class _Parser(argparse.ArgumentParser):
    """Reports usage errors as validation errors so they get a JSON summary."""

    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}", code="cli.usage")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tfrlab", description=__doc__.splitlines()[0],
                epilog="List options take space- or comma-separated values; quote lists whose "
                       "entries start with '-', e.g. --z \"0, -0.5j\".")
    sub = p.add_subparsers(dest="command", metavar="command")
    sub.required = True
    for command in _OPTIONS:
        sp_ = sub.add_parser(command, help=f"{command} ({_MODULE[command]} module)")
        sp_.add_argument("--config", default=argparse.SUPPRESS, help="JSON file of options")
        sp_.add_argument("--selftest", action="store_true", default=argparse.SUPPRESS,
                         help="run the module's oracle comparisons")
        sp_.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                         help="cap on worker threads (env TFRLAB_THREADS)")
        for flag, typ, default, help_ in _spec(command):
            if typ is bool:
                sp_.add_argument(flag, action="store_true", default=argparse.SUPPRESS, help=help_)
            elif typ in (_float_list, _int_list, _complex_list):
                sp_.add_argument(flag, nargs="+", type=str, default=argparse.SUPPRESS,
                                 help=f"{help_} (default {default})")
            else:
                sp_.add_argument(flag, type=typ, default=argparse.SUPPRESS,
                                 help=f"{help_} (default {default})")
    return p


def _resolve(command: str, ns: argparse.Namespace) -> dict:
    """Defaults, overridden by the config file, overridden by flags."""
    spec = {_dest(flag): (typ, default) for flag, typ, default, _ in _spec(command)}
    cfg = {k: d for k, (_, d) in spec.items()}
    flags = vars(ns)
    if "config" in flags:
        path = Path(flags["config"])
        if not path.exists():
            raise ValidationError(f"no such config file: {path}", code="cli.config")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config is not valid JSON ({exc})", code="cli.config") from None
        if not isinstance(data, dict):
            raise ValidationError("config must be a JSON object", code="cli.config")
        if data.get("command", command) != command:
            raise ValidationError(f"config is for command {data['command']!r}", code="cli.config")
        data.pop("command", None)
        norm = {k.replace("-", "_"): v for k, v in data.items()}
        unknown = sorted(set(norm) - set(spec) - {"threads"})
        if unknown:
            raise ValidationError(f"unknown config keys {unknown}", code="cli.config")
        for k, v in norm.items():
            if k == "threads":
                cfg[k] = int(v)
                continue
            typ = spec[k][0]
            try:
                if v is None or typ is str and isinstance(v, dict):
                    cfg[k] = v
                elif typ is bool:
                    cfg[k] = bool(v)
                else:
                    cfg[k] = typ(v)
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"config key {k!r}: {exc}", code="cli.config") from None
    for k, v in flags.items():
        if k in ("config", "command", "selftest"):
            continue
        if k in spec and spec[k][0] in (_float_list, _int_list, _complex_list):
            try:
                v = spec[k][0](v)
            except ValueError as exc:
                raise ValidationError(f"--{k.replace('_', '-')}: {exc}", code="cli.bad_flag") from None
        cfg[k] = v
    return cfg


def _threads(cfg: dict) -> int:
    n = cfg.get("threads")
    if n is None:
        env = os.environ.get("TFRLAB_THREADS")
        if env:
            try:
                n = int(env)
            except ValueError:
                raise ValidationError(f"TFRLAB_THREADS={env!r} is not an integer", code="cli.threads") from None
    if n is None:
        return 1
    if n < 1:
        raise ValidationError("--threads must be at least 1", code="cli.threads")
    return int(n)


# -- inputs ------------------------------------------------------------------------


def _window(cfg: dict) -> win.AnalyticWindow:
    w = cfg.get("window") or "gaussian"
    params = cfg.get("window_params")
    if isinstance(params, str):
        try:
            params = json.loads(params)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"--window-params is not JSON ({exc})", code="cli.bad_window") from None
    if isinstance(w, str) and w.lstrip().startswith("{"):
        try:
            w = json.loads(w)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"window descriptor is not JSON ({exc})", code="cli.bad_window") from None
    if isinstance(w, dict):
        if params:
            w = {"kind": w.get("kind"), "params": {**w.get("params", {}), **params}}
        return win.AnalyticWindow.from_descriptor(w)
    if w not in _FACTORIES:
        raise ValidationError(f"unknown window {w!r}; choose from {sorted(_FACTORIES)}", code="cli.bad_window")
    params = dict(params or {})
    if w == "hermite":
        params.setdefault("order", 0)
    if w == "generalized_gaussian":
        params = {k: complex(*v) if isinstance(v, list) else v for k, v in params.items()}
    try:
        return _FACTORIES[w](**params)
    except TypeError as exc:
        raise ValidationError(f"bad parameters for window {w!r}: {exc}", code="cli.bad_window") from None


def _grid(cfg: dict) -> TimeGrid:
    L = cfg["L"]
    if L is None or L < 2:
        raise ValidationError("L must be at least 2", code="cli.bad_grid")
    return TimeGrid(L, cfg.get("dt"))


def _sample(w: win.AnalyticWindow, grid: TimeGrid) -> FiniteSignal:
    return w.sample(grid.length, grid.step)


def _signals(cfg: dict) -> tuple[FiniteSignal, FiniteSignal]:
    """``(f, g)``: the input signal (or the sampled window) and the sampled window on its grid."""
    if cfg.get("input"):
        f = io.read_signal(cfg["input"])
        grid = f.grid
    else:
        grid = _grid(cfg)
        f = None
    g = _sample(_window(cfg), grid)
    return (g if f is None else f), g


def _window_signal(cfg: dict) -> FiniteSignal:
    """The Gabor window: the input file if given, else the sampled window."""
    return io.read_signal(cfg["input"]) if cfg.get("input") else _sample(_window(cfg), _grid(cfg))


def _second(cfg: dict, f: FiniteSignal) -> FiniteSignal:
    if not cfg.get("input2"):
        return f
    h = io.read_signal(cfg["input2"])
    if h.length != f.length or not math.isclose(h.dt, f.dt):
        raise ValidationError("second signal lives on a different grid", code="cli.grid_mismatch")
    return h


def _system(cfg: dict, g: FiniteSignal) -> gb.GaborSystem:
    if cfg.get("a") is None or cfg.get("b") is None:
        raise ValidationError("--a and --b are required", code="cli.missing_option")
    return gb.GaborSystem(g, cfg["a"], cfg["b"], cfg.get("shear") or 0)


def _write(cfg: dict, writer, obj) -> dict:
    if cfg.get("output"):
        writer(cfg["output"], obj)
        return {"output": cfg["output"]}
    return {}


def _tf_metrics(F: tfr.TFMatrix) -> dict:
    mod = np.abs(F.values)
    return {"n_x": F.n_x, "n_omega": F.n_omega, "max_abs": float(mod.max()),
            "energy": float(np.sum(mod**2) * F.dx * F.domega)}


# -- commands --------------------------------------------------------------------


def _cmd_stft(cfg):
    f, g = _signals(cfg)
    F = tfr.stft(f, g, cfg["hop"])
    return {**_tf_metrics(F), **_write(cfg, io.write_tfmatrix, F)}


def _cmd_spectrogram(cfg):
    f, g = _signals(cfg)
    F = tfr.spectrogram(f, g.normalized(), cfg["hop"])
    m = _tf_metrics(F)
    m["mass"] = float(np.sum(F.values.real) * F.dx * F.domega)
    return {**m, **_write(cfg, io.write_tfmatrix, F)}


def _cmd_ambiguity(cfg):
    f, _ = _signals(cfg)
    g = _second(cfg, f)
    F = tfr.ambiguity(f, g, cfg["hop"])
    i, j = np.unravel_index(np.argmax(np.abs(F.values)), F.shape)
    x, w = F.x_grid[i], F.omega_grid[j]
    return {**_tf_metrics(F), "peak_x": float(x), "peak_omega": float(w),
            "peak_abs": float(abs(F.values[i, j])), **_write(cfg, io.write_tfmatrix, F)}


def _cmd_wigner(cfg):
    f, _ = _signals(cfg)
    g = _second(cfg, f)
    F = tfr.wigner(f, g)
    m = _tf_metrics(F)
    if g is f:
        m.update(min=float(F.values.real.min()), max=float(F.values.real.max()),
                 imag_max=float(np.abs(F.values.imag).max()))
    return {**m, **_write(cfg, io.write_tfmatrix, F)}


def _cmd_rihaczek(cfg):
    f, _ = _signals(cfg)
    g = _second(cfg, f)
    F = tfr.rihaczek(f, g)
    total = complex(np.sum(F.values) * F.dx * F.domega)
    return {**_tf_metrics(F), "integral": total, **_write(cfg, io.write_tfmatrix, F)}


def _default_N(L: int) -> int:
    return max(d for d in gb.divisors(L) if d * d <= L)


def _cmd_zak(cfg):
    f, _ = _signals(cfg)
    N = cfg.get("N") or _default_N(f.length)
    Z = zk.zak_finite(f, N)
    mod2 = np.abs(Z.values) ** 2
    return {"N": Z.N, "M": Z.M, "min_abs2": float(mod2.min()), "max_abs2": float(mod2.max()),
            "cell_mass": Z.cell_mass(), "norm2": float(f.norm() ** 2),
            "quasiperiodicity_residual": zk.quasiperiodicity_residual(Z), **_write(cfg, io.write_zak, Z)}


def _cmd_frame_bounds(cfg):
    g = _window_signal(cfg)
    G = _system(cfg, g)
    method = cfg["method"]
    if method == "auto":
        method = "dense" if G.length <= gb.DENSE_MAX_LENGTH else "iterative"
    rep = gb.frame_bounds(G, method)
    out = {"A": rep.A, "B": rep.B, "condition": rep.condition, "method": rep.method,
           "density": G.density, "is_frame": rep.is_frame}
    if G.a * G.b == G.length and not G.shear:
        z = zk.zak_frame_bounds(G)
        out["zak_min_abs2"], out["zak_max_abs2"] = z.A, z.B
    return out


def _cmd_dual_window(cfg):
    g = _window_signal(cfg)
    G = _system(cfg, g)
    rep = gb.frame_bounds(G, "dense" if G.length <= gb.DENSE_MAX_LENGTH else "iterative")
    if cfg.get("tight"):
        h = gb.tight_window(G)
        residual = gb.wexler_raz_residual(h, h, G)
    else:
        h = gb.canonical_dual(G)
        residual = gb.wexler_raz_residual(g, h, G)
    return {"A": rep.A, "B": rep.B, "tight": bool(cfg.get("tight")), "norm": h.norm(),
            "wexler_raz_residual": residual, **_write(cfg, io.write_signal, h)}


def _cmd_frame_scan(cfg):
    g = _window_signal(cfg)
    L = g.length
    a_list = cfg.get("a_list") or gb.divisors(L)
    b_list = cfg.get("b_list") or gb.divisors(L)
    rows = gb.frame_set_scan(g, [(a, b) for a in a_list for b in b_list], cfg["method"])
    frames = sum(math.isfinite(r.condition) for r in rows)
    return {"L": L, "rows": len(rows), "frames": frames, **_write(cfg, io.write_scan_csv, rows)}


def _cmd_wexler_raz(cfg):
    g = _window_signal(cfg)
    G = _system(cfg, g)
    if cfg.get("dual"):
        h = _second({"input2": cfg["dual"]}, g)
    else:
        h = gb.canonical_dual(G)
    return {"residual": gb.wexler_raz_residual(g, h, G), "volume": G.volume,
            "canonical": not cfg.get("dual")}


def _cmd_figa(cfg):
    g = _window_signal(cfg)
    G = _system(cfg, g)
    rng = np.random.default_rng(cfg["seed"])
    worst = 0.0
    L, dt = g.length, g.dt
    for _ in range(cfg["trials"]):
        f, h, gt = (FiniteSignal.random(L, rng, dt) for _ in range(3))
        lhs, rhs = gb.figa_check(f, h, g, gt, G)
        scale = f.norm() * h.norm() * g.norm() * gt.norm()
        worst = max(worst, abs(lhs - rhs) / scale)
    return {"trials": cfg["trials"], "max_relative_difference": worst}


def _times(cfg, s: sp.SampleSet) -> np.ndarray:
    if cfg.get("t") is not None:
        return np.asarray(cfg["t"], dtype=float)
    if cfg.get("t_range") is not None:
        r = cfg["t_range"]
        if len(r) != 3 or int(r[2]) != r[2] or r[2] < 1:
            raise ValidationError("--t-range needs lo hi n", code="cli.bad_flag")
        return np.linspace(r[0], r[1], int(r[2]))
    return s.T * (s.indices[:-1] + 0.5)


def _cmd_sample_reconstruct(cfg):
    if not cfg.get("samples"):
        raise ValidationError("--samples is required", code="cli.missing_option")
    s = io.read_samples(cfg["samples"])
    t = _times(cfg, s)
    method = cfg["method"]
    if method == "wkns":
        r = sp.wkns_reconstruct(s, t, cfg.get("bandwidth"))
    elif method == "bandpass":
        carrier = cfg.get("carrier")
        if carrier is None:
            if s.band is None:
                raise ValidationError("--carrier or a declared band is required", code="cli.missing_option")
            carrier = 0.5 * (s.band[0] + s.band[1])
        r = sp.bandpass_reconstruct(s, carrier, t, cfg.get("bandwidth"))
    elif method == "s0":
        w = _window(cfg) if cfg.get("window") not in (None, "gaussian") else win.s0_window()
        r = sp.s0_window_reconstruct(s, w, t)
    else:
        raise ValidationError(f"unknown method {method!r}", code="cli.bad_flag")
    value = np.atleast_1d(r.value)
    tail = np.atleast_1d(r.tail_estimate)
    out = {"n_points": int(t.size), "method": method, "max_tail_estimate": float(tail.max())}
    if cfg.get("output"):
        io.write_rows_csv(cfg["output"], ["t", "re", "im", "tail"],
                          [(float(a), float(v.real), float(v.imag), float(e)) for a, v, e in zip(t, value, tail)])
        out["output"] = cfg["output"]
    return out


def _cmd_poisson_check(cfg):
    r = sp.poisson_check(_window(cfg), cfg["t"], cfg["K"])
    ok = r.difference <= max(r.tail_bound, 1e-12 * max(1.0, abs(r.lhs)))
    if not ok:
        raise NumericalError(f"Poisson sides differ by {r.difference!r}, beyond the tail bound {r.tail_bound!r}",
                             code="sampling.poisson_mismatch")
    return {"lhs": r.lhs, "rhs": r.rhs, "difference": r.difference, "tail_bound": r.tail_bound}


def _cmd_bargmann(cfg):
    src = io.read_signal(cfg["input"]) if cfg.get("input") else _window(cfg)
    nrm = src.norm()
    if cfg.get("z") is not None:
        z = np.asarray(cfg["z"], dtype=complex)
        vals = bg.bargmann(src, z)
        out = {"n_points": int(z.size), "norm": nrm}
        if cfg.get("output"):
            io.write_fock_csv(cfg["output"], z, vals)
            out["output"] = cfg["output"]
        return out
    grid = bg.FockGrid(cfg["radius"], cfg["n_radial"], cfg["n_angular"])
    F = bg.fock_samples(src, grid)
    fn = bg.fock_norm(F)
    out = {"n_points": int(F.z.size), "norm": nrm, "fock_norm": fn,
           "relative_difference": abs(fn - nrm) / nrm if nrm else abs(fn)}
    if cfg.get("output"):
        io.write_fock_csv(cfg["output"], F.z, F.value)
        out["output"] = cfg["output"]
    return out


def _cmd_hermite(cfg):
    n = cfg["order"]
    h = bg.hermite(n)
    w = np.linspace(-4, 4, 161)
    eig = float(np.max(np.abs(h.fourier(w) - (-1j) ** n * h.evaluate(w))))
    grid = _grid(cfg)
    hs = _sample(h, grid)
    return {"order": n, "norm": hs.norm(), "fourier_eigen_residual": eig, **_write(cfg, io.write_signal, hs)}


def _cmd_diagnostics(cfg):
    f, g = _signals(cfg)
    fn = f.normalized()
    g0 = _sample(win.gaussian(), f.grid).normalized()
    prod, bound = dg.hpw_product(f)
    out = {"hpw_product": prod, "hpw_bound": bound}
    for p in cfg["p"]:
        lhs, rhs = dg.lieb_check(fn, g0, p)
        out[f"lieb_p{p:g}"] = {"lhs": lhs, "rhs": rhs, "holds": dg.lieb_holds(lhs, rhs, p)}
    hw = cfg["half_width"]
    T = np.abs(f.grid.signed_times()) <= hw
    Om = np.abs(f.grid.frequencies()) <= hw
    ds = dg.donoho_stark_check(f, T, Om)
    out["donoho_stark"] = {"eps_T": ds.eps_T, "eps_Omega": ds.eps_Omega, "slack": ds.slack}
    mass, area = dg.weak_up_stft(fn, g0, lambda X, W: (np.abs(X) <= hw) & (np.abs(W) <= hw))
    out["weak_up"] = {"mass": mass, "area": area, "slack": area - mass}
    block = cfg.get("block") or _default_N(f.length)
    out["amalgam_norm"] = dg.amalgam_norm(f, block)
    return out


_COMMANDS = {
    "stft": _cmd_stft,
    "spectrogram": _cmd_spectrogram,
    "ambiguity": _cmd_ambiguity,
    "wigner": _cmd_wigner,
    "rihaczek": _cmd_rihaczek,
    "zak": _cmd_zak,
    "frame-bounds": _cmd_frame_bounds,
    "dual-window": _cmd_dual_window,
    "frame-scan": _cmd_frame_scan,
    "wexler-raz": _cmd_wexler_raz,
    "figa": _cmd_figa,
    "sample-reconstruct": _cmd_sample_reconstruct,
    "poisson-check": _cmd_poisson_check,
    "bargmann": _cmd_bargmann,
    "hermite": _cmd_hermite,
    "diagnostics": _cmd_diagnostics,
}


def _emit(summary: dict, stream=None):
    stream = sys.stdout if stream is None else stream
    stream.write(json.dumps(io.json_safe(summary), allow_nan=False) + "\n")
    stream.flush()


def run(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ValidationError as exc:
        command = next((a for a in argv if a in _COMMANDS), None)
        _emit({"command": command, "status": "error", "key_metrics": {},
               "error": {"code": exc.code, "message": str(exc)}})
        return 2
    command = ns.command
    try:
        if getattr(ns, "selftest", False):
            checks = selftest.run(_MODULE[command])
            failed = [c.name for c in checks if not c.passed]
            _emit({"command": command, "status": "ok" if not failed else "fail",
                   "key_metrics": {"module": _MODULE[command], "passed": len(checks) - len(failed),
                                   "failed": len(failed),
                                   "checks": [c._asdict() for c in checks]}})
            return 0 if not failed else 3
        cfg = _resolve(command, ns)
        metrics = {"threads": _threads(cfg)}
        metrics.update(_COMMANDS[command](cfg))
    except ValidationError as exc:
        _emit({"command": command, "status": "error", "key_metrics": {},
               "error": {"code": exc.code, "message": str(exc)}})
        return 2
    except (NumericalError, TFError, np.linalg.LinAlgError) as exc:
        code = getattr(exc, "code", "numerical.linalg")
        _emit({"command": command, "status": "error", "key_metrics": {},
               "error": {"code": code, "message": str(exc)}})
        return 3
    _emit({"command": command, "status": "ok", "key_metrics": metrics})
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
