"""Command line front end.

Subcommands: rootsys, measure, decompose, density, converge.  Weights are
comma-separated fundamental-weight coordinates; a tensor factor is written
as `coords:tau`, e.g. `1,0:1` or `2,1:1/2`.  Exit codes: 0 success, 2 bad
configuration (the diagnostic names the offending field), 3 computation cap
exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .convergence import convergence_report, report_to_csv, report_to_json
from .densities import make_density_model, normalization_quadrature
from .errors import (
    DegenerateSpec,
    InadmissibleN,
    NotDominant,
    RankTooLarge,
    UnsupportedType,
    WeylCapExceeded,
)
from .measures import (
    TensorSpec,
    admissible_N,
    eta_extended_measure,
    eta_measure,
    measure_to_csv,
    measure_to_json,
    xi_measure,
)
from .repchar import (
    load_multiplicity_map,
    peel_off_decompose,
    racah_decompose,
    save_multiplicity_map,
    tensor_power_table,
)
from .rootsys import CartanType, build_root_system, rootsys_to_json

SIGMA_CONVENTIONS = ("consistent", "paper")
FORMATS = ("json", "csv")


class BadField(Exception):
    """Configuration problem tied to one named field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


@dataclass
class ExperimentConfig:
    cartan_type: str
    factors: tuple
    N_list: tuple
    sigma_convention: str = "consistent"
    format: str = "csv"
    cache_dir: str | None = None
    plot: bool = False

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise BadField("--config", f"cannot read {path}: {exc}")
        except json.JSONDecodeError as exc:
            raise BadField("--config", f"{path} is not valid JSON: {exc}")
        for key in ("cartan_type", "factors", "N_list"):
            if key not in doc:
                raise BadField(key, "missing from config file")
        factors = []
        for item in doc["factors"]:
            try:
                factors.append((tuple(int(x) for x in item["weight"]), Fraction(str(item["tau"]))))
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                raise BadField("factors", f"bad entry {item!r}: {exc}")
        try:
            n_list = tuple(int(n) for n in doc["N_list"])
        except (TypeError, ValueError) as exc:
            raise BadField("N_list", str(exc))
        cfg = cls(
            cartan_type=str(doc["cartan_type"]),
            factors=tuple(factors),
            N_list=n_list,
            sigma_convention=str(doc.get("sigma_convention", "consistent")),
            format=str(doc.get("format", "csv")),
            cache_dir=doc.get("cache_dir"),
            plot=bool(doc.get("plot", False)),
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.sigma_convention not in SIGMA_CONVENTIONS:
            raise BadField("sigma_convention", f"must be one of {SIGMA_CONVENTIONS}")
        if self.format not in FORMATS:
            raise BadField("format", f"must be one of {FORMATS}")
        if not self.factors:
            raise BadField("factors", "at least one factor is required")
        if not self.N_list or any(n < 1 for n in self.N_list):
            raise BadField("N_list", "need a nonempty list of positive integers")


def _parse_type(text: str) -> CartanType:
    try:
        return CartanType.parse(text)
    except (UnsupportedType, ValueError) as exc:
        raise BadField("--type", str(exc))


def _parse_factor(text: str):
    head, sep, tail = text.partition(":")
    if not sep:
        raise BadField("--factor", f"{text!r} is missing ':tau' (expected coords:tau)")
    try:
        coords = tuple(int(x) for x in head.split(","))
        tau = Fraction(tail)
    except (ValueError, ZeroDivisionError) as exc:
        raise BadField("--factor", f"cannot parse {text!r}: {exc}")
    return coords, tau


def _parse_n_list(text: str):
    try:
        values = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise BadField("--N", f"cannot parse {text!r}: {exc}")
    if any(n < 1 for n in values):
        raise BadField("--N", "tensor powers must be positive")
    return values


def _build_spec(type_str: str, factors) -> TensorSpec:
    t = _parse_type(type_str)
    try:
        rs = build_root_system(t)
    except UnsupportedType as exc:
        raise BadField("--type", str(exc))
    try:
        return TensorSpec(rs, tuple(factors))
    except (NotDominant, DegenerateSpec, ValueError) as exc:
        raise BadField("--factor", str(exc))


def _check_admissible(spec: TensorSpec, n_values) -> None:
    for n in n_values:
        if not admissible_N(spec, n):
            raise BadField("--N", f"N = {n} makes some tau*N non-integral")


def _cache_dir(args) -> str | None:
    explicit = getattr(args, "cache_dir", None)
    return explicit or os.environ.get("LTL_CACHE_DIR")


def _cache_key(spec: TensorSpec, n: int) -> str:
    factors = sorted(spec.factors)
    blob = f"{spec.rs.cartan_type}|{factors}|N={n}|v1"
    return hashlib.sha256(blob.encode()).hexdigest()


def _power_table(spec: TensorSpec, n_values, cache_dir: str | None) -> dict:
    """Multiplicity maps for each N, reading and filling the cache if set."""
    if cache_dir is None:
        return tensor_power_table(spec.rs, spec.factors, n_values)
    os.makedirs(cache_dir, exist_ok=True)
    table = {}
    missing = []
    for n in n_values:
        path = os.path.join(cache_dir, f"ltl_{_cache_key(spec, n)}.json")
        if os.path.exists(path):
            table[n] = load_multiplicity_map(path)
        else:
            missing.append(n)
    if missing:
        fresh = tensor_power_table(spec.rs, spec.factors, missing)
        for n in missing:
            table[n] = fresh[n]
            save_multiplicity_map(fresh[n], os.path.join(cache_dir, f"ltl_{_cache_key(spec, n)}.json"))
    return table


def _emit(text: str, args) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_rootsys(args) -> int:
    t = _parse_type(args.type)
    rs = build_root_system(t)
    doc = rootsys_to_json(rs)
    doc["weyl_order"] = len(rs.weyl)
    _emit(_json_dumps(doc), args)
    return 0


def cmd_measure(args) -> int:
    spec = _build_spec(args.type, [_parse_factor(f) for f in args.factor])
    n_values = _parse_n_list(args.N)
    if len(n_values) != 1:
        raise BadField("--N", "measure takes exactly one tensor power")
    n = n_values[0]
    _check_admissible(spec, [n])
    table = _power_table(spec, [n], _cache_dir(args))
    builder = {"xi": xi_measure, "eta": eta_measure, "eta_extended": eta_extended_measure}[args.kind]
    measure = builder(spec, n, args.sigma_convention, multiplicities=table[n])
    if args.format == "csv":
        _emit(measure_to_csv(measure), args)
    else:
        doc = measure_to_json(measure)
        doc["kind"] = args.kind
        doc["spec"] = spec.describe()
        _emit(_json_dumps(doc), args)
    return 0


def cmd_decompose(args) -> int:
    spec = _build_spec(args.type, [_parse_factor(f) for f in args.factor])
    n_values = _parse_n_list(args.N)
    if len(n_values) != 1:
        raise BadField("--N", "decompose takes exactly one tensor power")
    n = n_values[0]
    _check_admissible(spec, [n])
    table = _power_table(spec, [n], _cache_dir(args))
    decompose = racah_decompose if args.method == "racah" else peel_off_decompose
    result = decompose(spec.rs, table[n])
    items = sorted(result.components.items())
    if args.format == "csv":
        rank = spec.rs.rank
        header = ",".join(f"weight_{i+1}" for i in range(rank)) + ",multiplicity"
        lines = [header]
        for w, c in items:
            lines.append(",".join(str(x) for x in w) + f",{c}")
        _emit("\n".join(lines) + "\n", args)
    else:
        doc = {
            "spec": spec.describe(),
            "N": n,
            "method": args.method,
            "components": [{"weight": list(w), "multiplicity": str(c)} for w, c in items],
            "total_dim": str(table[n].total_dim),
        }
        _emit(_json_dumps(doc), args)
    return 0


def _plot_files(model, base: str) -> None:
    rs = model.rs
    rank = rs.rank
    if rank > 2:
        raise BadField("--plot", "plotting supports rank <= 2 only")
    cone = model.kind in ("eta", "gue")
    sig = [math.sqrt(float(rs.gram_omega_inv[i][i])) for i in range(rank)]
    if rank == 1:
        lo = 0.0 if cone else -6.0 * sig[0]
        xs = np.linspace(lo, 6.0 * sig[0], 401)
        vals = model.evaluate(xs[:, None])
        dat = "\n".join(f"{x:.12g} {v:.12g}" for x, v in zip(xs, vals)) + "\n"
        script = (
            f'set title "{rs.cartan_type} {model.kind} limit density"\n'
            'set xlabel "x"\nset ylabel "density"\n'
            f'plot "{base}.dat" using 1:2 with lines notitle\n'
        )
    else:
        los = [0.0 if cone else -6.0 * s for s in sig]
        axes = [np.linspace(lo, 6.0 * s, 101) for lo, s in zip(los, sig)]
        rows = []
        for x in axes[0]:
            pts = np.stack([np.full_like(axes[1], x), axes[1]], axis=-1)
            vals = model.evaluate(pts)
            for y, v in zip(axes[1], vals):
                rows.append(f"{x:.12g} {y:.12g} {v:.12g}")
            rows.append("")
        dat = "\n".join(rows) + "\n"
        script = (
            f'set title "{rs.cartan_type} {model.kind} limit density"\n'
            "set pm3d map\nset size ratio -1\n"
            f'splot "{base}.dat" using 1:2:3 notitle\n'
        )
    with open(base + ".dat", "w") as fh:
        fh.write(dat)
    with open(base + ".gp", "w") as fh:
        fh.write(script)


def cmd_density(args) -> int:
    t = _parse_type(args.type)
    rs = build_root_system(t)
    try:
        model = make_density_model(rs, args.kind)
    except UnsupportedType as exc:
        raise BadField("--kind", str(exc))
    doc = {
        "cartan_type": str(rs.cartan_type),
        "kind": args.kind,
        "rank": rs.rank,
        "norm_const": model.norm_const,
    }
    if args.check_normalization:
        resolution = args.resolution
        doc["quadrature_mass"] = normalization_quadrature(model, resolution)
    if args.plot:
        base = args.output or f"density_{rs.cartan_type}_{args.kind}"
        _plot_files(model, base)
        doc["plot_files"] = [base + ".dat", base + ".gp"]
        sys.stdout.write(_json_dumps(doc))
    else:
        _emit(_json_dumps(doc), args)
    return 0


def cmd_converge(args) -> int:
    if args.config:
        cfg = ExperimentConfig.from_file(args.config)
        type_str = args.type or cfg.cartan_type
        factors = [_parse_factor(f) for f in args.factor] if args.factor else cfg.factors
        n_values = _parse_n_list(args.N) if args.N else cfg.N_list
        convention = args.sigma_convention or cfg.sigma_convention
        fmt = args.format or cfg.format
        cache_dir = getattr(args, "cache_dir", None) or cfg.cache_dir or os.environ.get("LTL_CACHE_DIR")
    else:
        for name, value in (("--type", args.type), ("--factor", args.factor), ("--N", args.N)):
            if not value:
                raise BadField(name, "required unless --config is given")
        type_str = args.type
        factors = [_parse_factor(f) for f in args.factor]
        n_values = _parse_n_list(args.N)
        convention = args.sigma_convention or "consistent"
        fmt = args.format or "csv"
        cache_dir = _cache_dir(args)
    if args.t_grid not in (None, "default"):
        raise BadField("--t-grid", f"only 'default' is supported, got {args.t_grid!r}")
    spec = _build_spec(type_str, factors)
    _check_admissible(spec, n_values)
    if spec.rs.rank > 3:
        raise RankTooLarge(f"converge needs rank <= 3 for the TV metric, got {spec.rs.rank}")
    table = _power_table(spec, sorted(set(n_values)), cache_dir)
    report = convergence_report(
        spec,
        n_values,
        bins_per_axis=args.bins,
        convention=convention,
        table=table,
    )
    if fmt == "csv":
        _emit(report_to_csv(report), args)
    else:
        _emit(_json_dumps(report_to_json(report)), args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ltl", description="Exact tensor-power weight measures and their limits."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_root = sub.add_parser("rootsys", help="root system data")
    p_root.add_argument("action", choices=["info"])
    p_root.add_argument("--type", required=True, help="Cartan type, e.g. A2, B3, G2")
    p_root.add_argument("--output")
    p_root.set_defaults(handler=cmd_rootsys)

    p_meas = sub.add_parser("measure", help="exact weight measures of a tensor power")
    p_meas.add_argument("kind", choices=["xi", "eta", "eta_extended"])
    p_meas.add_argument("--type", required=True)
    p_meas.add_argument("--factor", action="append", required=True, metavar="COORDS:TAU")
    p_meas.add_argument("--N", required=True)
    p_meas.add_argument("--sigma-convention", choices=SIGMA_CONVENTIONS, default="consistent")
    p_meas.add_argument("--format", choices=FORMATS, default="csv")
    p_meas.add_argument("--cache-dir")
    p_meas.add_argument("--output")
    p_meas.set_defaults(handler=cmd_measure)

    p_dec = sub.add_parser("decompose", help="irreducible components of a tensor power")
    p_dec.add_argument("--type", required=True)
    p_dec.add_argument("--factor", action="append", required=True, metavar="COORDS:TAU")
    p_dec.add_argument("--N", required=True)
    p_dec.add_argument("--method", choices=["racah", "peel"], default="racah")
    p_dec.add_argument("--format", choices=FORMATS, default="csv")
    p_dec.add_argument("--cache-dir")
    p_dec.add_argument("--output")
    p_dec.set_defaults(handler=cmd_decompose)

    p_den = sub.add_parser("density", help="closed-form limit densities")
    p_den.add_argument("kind", choices=["xi", "eta", "eta_extended", "gue"])
    p_den.add_argument("--type", required=True)
    p_den.add_argument("--check-normalization", action="store_true")
    p_den.add_argument("--resolution", type=int)
    p_den.add_argument("--plot", action="store_true")
    p_den.add_argument("--output")
    p_den.set_defaults(handler=cmd_density)

    p_con = sub.add_parser("converge", help="convergence report across tensor powers")
    p_con.add_argument("--type")
    p_con.add_argument("--factor", action="append", metavar="COORDS:TAU")
    p_con.add_argument("--N", help="comma-separated list, e.g. 4,16,64")
    p_con.add_argument("--t-grid", dest="t_grid")
    p_con.add_argument("--bins", type=int)
    p_con.add_argument("--sigma-convention", choices=SIGMA_CONVENTIONS)
    p_con.add_argument("--format", choices=FORMATS)
    p_con.add_argument("--config", help="JSON experiment config; flags override")
    p_con.add_argument("--cache-dir")
    p_con.add_argument("--output")
    p_con.set_defaults(handler=cmd_converge)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except BadField as exc:
        print(f"error: {exc.field}: {exc.message}", file=sys.stderr)
        return 2
    except (InadmissibleN, NotDominant, DegenerateSpec, UnsupportedType) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (WeylCapExceeded, RankTooLarge) as exc:
        print(f"error: computation cap exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
