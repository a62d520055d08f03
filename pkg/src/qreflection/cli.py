"""Command-line front end: ``qreflection <command> [options]``.

Commands
--------
potential     tabulate V(z) per material (CSV + JSON sidecar)
reflectivity  |r|^2 against drop height (CSV per material + summary JSON)
badlands      badlands profiles Q(z) at chosen heights (CSV + summary JSON)
lifetimes     material -> potential -> scattering length -> lifetime table
materials     list the known materials and the config search path

Exit status is 0 when every requested computation converged, 1 on a
numerical failure and 2 on usage or configuration errors.
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
import sys
from pathlib import Path

import numpy as np

from .casimir import material_table, ratio_to_ideal
from .constants import energy_from_height
from .errors import ConfigError, ConvergenceError, DomainError
from .gravity import GravityConfig, gbs_lifetime
from .io import fmt, write_csv, write_json
from .liouville import badlands_profile, barrier_peak
from .materials import ENV_VAR, TABLE_SURFACES, get_material, load_materials, search_path
from .reflection import ScatteringProblem, integrate_amplitudes, scattering_length


def parse_heights(text):
    """``start:stop:log|lin:count``, a comma list, or a single value [m]."""
    text = text.strip()
    if not text:
        raise argparse.ArgumentTypeError("empty height list")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 4 or parts[2] not in ("log", "lin"):
            raise argparse.ArgumentTypeError(f"expected start:stop:log|lin:count, got {text!r}")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[3])
        except ValueError:
            raise argparse.ArgumentTypeError(f"malformed height range {text!r}") from None
        if count < 1:
            raise argparse.ArgumentTypeError("height count must be >= 1")
        if start <= 0 or stop <= 0:
            raise argparse.ArgumentTypeError("heights must be positive")
        heights = (np.geomspace if parts[2] == "log" else np.linspace)(start, stop, count)
    else:
        try:
            heights = [float(h) for h in text.split(",") if h.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"malformed height list {text!r}") from None
    heights = [float(h) for h in heights]
    if not heights:
        raise argparse.ArgumentTypeError("empty height list")
    if any(h <= 0 for h in heights):
        raise argparse.ArgumentTypeError("heights must be positive")
    return heights


def parse_range(text):
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected zmin:zmax, got {text!r}") from None
    if not 0 < lo < hi:
        raise argparse.ArgumentTypeError("need 0 < zmin < zmax")
    return lo, hi


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--material", action="append", metavar="NAME",
                        help="material name (repeatable); see 'qreflection materials'")
    common.add_argument("--porosity", type=float, help="vacuum fraction applied to every material")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--no-timestamp", action="store_true", help="omit the time stamp in CSV headers")
    common.add_argument("--tol", type=_positive(float), default=1e-11,
                        help="relative tolerance of the amplitude integration")
    common.add_argument("--jobs", type=_positive(int), default=1, help="worker processes")

    parser = argparse.ArgumentParser(prog="qreflection", description=__doc__.split("\n")[0])
    parser.add_argument("--check", action="store_true", help="run the golden-value suite and exit")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("potential", parents=[common], help="tabulate the Casimir-Polder potential")
    p.add_argument("--zrange", type=parse_range, default=(1e-2, 1e6), help="zmin:zmax in nm")
    p.add_argument("--points", type=_positive(int), default=321, help="grid points")

    p = sub.add_parser("reflectivity", parents=[common], help="reflection probability curves")
    p.add_argument("--heights", type=parse_heights, default=parse_heights("1e-7:1e2:log:19"),
                   help="drop heights in m: a,b,c or start:stop:log|lin:count")

    p = sub.add_parser("badlands", parents=[common], help="badlands profiles")
    p.add_argument("--heights", type=parse_heights, default=parse_heights("0.001,0.01,0.1"),
                   help="drop heights in m: a,b,c or start:stop:log|lin:count")
    p.add_argument("--points", type=_positive(int), default=400, help="profile points")

    p = sub.add_parser("lifetimes", parents=[common], help="bound-state lifetimes")
    p.add_argument("--gbar", type=_positive(float), default=9.81, help="gbar in m/s^2")

    sub.add_parser("materials", parents=[common], help="list materials")
    return parser


def resolve_materials(names, porosity, default):
    """MaterialModels for ``names``; raises KeyError naming the searched files."""
    out = []
    for name in names or default:
        material = get_material(name)
        if porosity is not None:
            if material.is_perfect:
                raise DomainError("--porosity does not apply to a perfect mirror")
            material = material.with_porosity(porosity)
        out.append(material)
    return out


def _map(fn, items, jobs):
    items = list(items)
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(min(jobs, len(items))) as ex:
            return list(ex.map(fn, items))
    return [fn(item) for item in items]


def _header(command, material, extra=()):
    return [f"qreflection {command}", f"material: {material.name}"] + list(extra)


# -- potential ---------------------------------------------------------------

def _table_job(args):
    material, zrange, points = args
    return material_table(material, None, zrange[0], zrange[1], points)


def run_potential(cfg):
    materials = resolve_materials(cfg.material, cfg.porosity, ["perfect"])
    tables = _map(_table_job, [(m, cfg.zrange, cfg.points) for m in materials], cfg.jobs)
    written = []
    for material, table in zip(materials, tables):
        ratio = ratio_to_ideal(table, table.z_grid)
        stem = f"potential_{material.name}"
        written.append(write_csv(
            cfg.out / f"{stem}.csv", ["z_nm", "V_neV", "ratio_to_ideal"],
            zip(table.z_grid, table.values, ratio),
            _header("potential", material, [f"c3_neV_nm3: {fmt(table.c3)}", f"c4_neV_nm4: {fmt(table.c4)}",
                                            f"rtol: {fmt(table.rtol)}"]),
            not cfg.no_timestamp))
        decades = np.array([z for z in 10.0 ** np.arange(-2, 7) if table.z_low <= z <= table.z_high])
        write_json(cfg.out / f"{stem}.json", {
            "material": material.name, "c3": table.c3, "c4": table.c4, "c4_star": table.c4_star,
            "z_low": table.z_low, "z_high": table.z_high, "rtol": table.rtol,
            "ratio_to_ideal": {fmt(z): r for z, r in zip(decades, ratio_to_ideal(table, decades))},
        })
    return written


# -- reflectivity ------------------------------------------------------------

def _reflect_job(args):
    material, heights, tol = args
    table = material_table(material)
    return [integrate_amplitudes(ScatteringProblem.from_height(table, h, rtol=tol)) for h in heights]


def run_reflectivity(cfg):
    materials = resolve_materials(cfg.material, cfg.porosity, ["perfect", "silicon", "silica"])
    heights = list(cfg.heights)
    results = _map(_reflect_job, [(m, heights + [0.10], cfg.tol) for m in materials], cfg.jobs)
    summary = {}
    for material, res in zip(materials, results):
        rows = [(h, energy_from_height(h), r.r.real, r.r.imag, r.probability, r.flux_deficit)
                for h, r in zip(heights, res)]
        write_csv(cfg.out / f"reflectivity_{material.name}.csv",
                  ["h_m", "E_neV", "re_r", "im_r", "prob_reflect", "flux_deficit"], rows,
                  _header("reflectivity", material, [f"tol: {fmt(cfg.tol)}"]), not cfg.no_timestamp)
        order = np.argsort(heights)
        probs = np.array([r.probability for r in res[:-1]])[order]
        summary[material.name] = {"prob_reflect_h0.10m": res[-1].probability,
                                  "monotone_decreasing": bool(np.all(np.diff(probs) <= 0)),
                                  "max_flux_deficit": max(abs(r.flux_deficit) for r in res)}
    write_json(cfg.out / "reflectivity.json", summary)
    return summary


# -- badlands ----------------------------------------------------------------

def _badlands_job(args):
    material, h, points = args
    prob = ScatteringProblem.from_height(material_table(material), h)
    profile = badlands_profile(prob, points)
    peak, z_peak = barrier_peak(prob)
    return profile, peak, z_peak


def run_badlands(cfg):
    materials = resolve_materials(cfg.material, cfg.porosity, ["silica"])
    jobs = [(m, h, cfg.points) for m in materials for h in cfg.heights]
    results = _map(_badlands_job, jobs, cfg.jobs)
    summary = []
    for (material, h, _), (profile, peak, z_peak) in zip(jobs, results):
        write_csv(cfg.out / f"badlands_{material.name}_h{fmt(h)}m.csv",
                  ["z_nm", "phase_zbold", "Q", "F"], zip(*profile),
                  _header("badlands", material, [f"h_m: {fmt(h)}"]), not cfg.no_timestamp)
        summary.append({"material": material.name, "h_m": h, "max_Q": peak, "z_at_max_nm": z_peak})
    write_json(cfg.out / "badlands.json", summary)
    return summary


# -- lifetimes ---------------------------------------------------------------

def _length_job(material):
    return scattering_length(material_table(material))


def format_lifetime_table(names, lengths, taus):
    """Aligned text table, one column per surface."""
    width = max(12, *(len(n) + 2 for n in names))
    lines = ["".ljust(12) + "".join(n.rjust(width) for n in names)]
    lines.append("tau (s)".ljust(12) + "".join(f"{t:.3g}".rjust(width) for t in taus))
    lines.append("Re a (nm)".ljust(12) + "".join(f"{a.real:.3f}".rjust(width) for a in lengths))
    lines.append("Im a (nm)".ljust(12) + "".join(f"{a.imag:.3f}".rjust(width) for a in lengths))
    return "\n".join(lines) + "\n"


def run_lifetimes(cfg):
    materials = resolve_materials(cfg.material, cfg.porosity, list(TABLE_SURFACES))
    lengths = _map(_length_job, materials, cfg.jobs)
    gcfg = GravityConfig(cfg.gbar)
    taus = [gbs_lifetime(a, gcfg) for a in lengths]
    names = [m.name for m in materials]
    write_csv(cfg.out / "lifetimes.csv", ["material", "re_a_nm", "im_a_nm", "tau_s"],
              [(n, a.real, a.imag, t) for n, a, t in zip(names, lengths, taus)],
              ["qreflection lifetimes", f"gbar_m_s2: {fmt(cfg.gbar)}"], not cfg.no_timestamp)
    text = format_lifetime_table(names, lengths, taus)
    (cfg.out / "lifetimes.txt").write_text(text)
    write_json(cfg.out / "lifetimes.json",
               {"gbar": cfg.gbar, "rows": [{"material": n, "a_nm": a, "tau_s": t}
                                           for n, a, t in zip(names, lengths, taus)]})
    print(text, end="")
    return taus


# -- materials ---------------------------------------------------------------

def run_materials(cfg):
    paths = search_path()
    print(f"search path (${ENV_VAR}, then built-in):")
    for p in paths:
        print(f"  {p}")
    for name, m in sorted(load_materials(paths)[0].items()):
        print(f"{name:<14} {m.kind:<18} porosity={m.porosity:g}  oscillators={len(m.oscillators)}")


COMMANDS = {"potential": run_potential, "reflectivity": run_reflectivity, "badlands": run_badlands,
            "lifetimes": run_lifetimes, "materials": run_materials}


def main(argv=None):
    parser = build_parser()
    cfg = parser.parse_args(argv)
    if cfg.check:
        from .golden import run_checks
        return 0 if run_checks() else 1
    if cfg.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        if cfg.command != "materials":
            resolve_materials(cfg.material, cfg.porosity, [])
    except (KeyError, ConfigError, DomainError) as exc:
        parser.error(exc.args[0] if isinstance(exc, KeyError) else str(exc))
    try:
        COMMANDS[cfg.command](cfg)
    except ConvergenceError as exc:
        print(f"qreflection: numerical failure: {exc}", file=sys.stderr)
        return 1
    except (DomainError, ConfigError, OSError) as exc:
        print(f"qreflection: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
