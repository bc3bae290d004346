"""Command-line front end: JSON files in, JSON on standard output.

Exit status is 0 on success, 1 on a domain error (a JSON body
``{"error", "message"}`` goes to standard error) and 2 on a usage error.
Set ``ALLPASS_LOG`` to a logging level name (``INFO``, ``DEBUG``) for
progress messages.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass

import numpy as np

from ._exceptions import AllPassError
from .blaschke import (
    ElementaryBlaschke,
    StateSpace2x2,
    build_bivariate,
    squared_from_pair,
)
from .gmr_replica import CASES, diagnose
from .mirror import METHODS, MirrorConfig, apply_config
from .polymat import PolyMat
from .regimes import DEFAULT_REGIME_CAP, count_regimes, enumerate_regimes, estimate_cost
from .roots import determinantal_roots, group_roots
from .tolerances import DEFAULT, Tolerances
from .verify import DEFAULT_GRID, allpass_defect, verify_transform

log = logging.getLogger("allpass")

CONFIG_HELP = """\
Root groups are indexed in sorted order: by modulus, then by argument in
(-pi, pi].  A conjugate pair is one group, represented by its member with
positive imaginary part.  A configuration is a 0/1 string with one
character per group; '1' mirrors the group to 1/conj(alpha), '0' keeps it.
Run the `roots` subcommand to see the order for a given input.
"""


@dataclass(frozen=True)
class CliConfig:
    tol_unit_circle: float = DEFAULT.unit_circle
    tol_real: float = DEFAULT.real
    tol_rank: float = DEFAULT.rank
    tol_pair: float = DEFAULT.pair
    grid: int = DEFAULT_GRID
    regime_cap: int = DEFAULT_REGIME_CAP
    method: str = "qr"

    def __post_init__(self):
        for name in ("tol_unit_circle", "tol_real", "tol_rank", "tol_pair"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.grid < 8:
            raise ValueError("grid must be at least 8")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")

    @property
    def tolerances(self) -> Tolerances:
        return DEFAULT.with_overrides(
            unit_circle=self.tol_unit_circle,
            real=self.tol_real,
            rank=self.tol_rank,
            pair=self.tol_pair,
        )

    @classmethod
    def from_args(cls, args):
        return cls(**{
            k: getattr(args, k) for k in cls.__dataclass_fields__ if hasattr(args, k)
        })


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _grid(text):
    value = int(text)
    if value < 8:
        raise argparse.ArgumentTypeError(f"grid must be at least 8, got {text}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _common_parser():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("tolerances and grid")
    g.add_argument("--tol-unit-circle", type=_positive_float, default=DEFAULT.unit_circle,
                   help="relative margin | |alpha| - 1 | treated as on the circle (default %(default)g)")
    g.add_argument("--tol-real", type=_positive_float, default=DEFAULT.real,
                   help="|imag| below which a root is real (default %(default)g)")
    g.add_argument("--tol-pair", type=_positive_float, default=DEFAULT.pair,
                   help="conjugate pairing distance (default %(default)g)")
    g.add_argument("--tol-rank", type=_positive_float, default=DEFAULT.rank,
                   help="relative singular value threshold (default %(default)g)")
    g.add_argument("--grid", type=_grid, default=DEFAULT_GRID,
                   help="unit-circle points for verification, >= 8 (default %(default)d)")
    return p


def _read_json(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


def _load_polymat(path, cfg):
    return PolyMat.from_json(_read_json(path), rank_tol=cfg.tol_rank)


def _groups(P, cfg):
    return group_roots(determinantal_roots(P), cfg.tolerances)


def cmd_roots(args, cfg):
    P = _load_polymat(args.inp, cfg)
    _emit([g.to_json() for g in _groups(P, cfg)])


def _mirror(P, bits, cfg):
    groups = _groups(P, cfg)
    config = MirrorConfig.from_bitstring(bits)
    if len(config) != len(groups):
        raise ValueError(f"config has {len(config)} flags but there are {len(groups)} root groups")
    if any(config.selections):
        out = apply_config(P, groups, config, cfg.method, cfg.tolerances)
    else:
        out = P.real()
    report = verify_transform(P, out, groups, config, cfg.grid)
    return config, out, report


def cmd_mirror(args, cfg):
    P = _load_polymat(args.inp, cfg)
    config, out, report = _mirror(P, args.config, cfg)
    log.info("mirrored with config %s via %s", config.to_bitstring(), cfg.method)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(out.to_json(), fh, indent=2)
            fh.write("\n")
    _emit({"config": config.to_bitstring(), "method": cfg.method,
           "polymat": out.to_json(), "report": report.to_json()})


def cmd_enumerate(args, cfg):
    P = _load_polymat(args.inp, cfg)
    results = enumerate_regimes(P, cfg.method, cfg.tolerances, cfg.regime_cap,
                                cfg.grid, workers=args.workers)
    _emit([
        {"config": c.to_bitstring(), "polymat": out.to_json(), "report": rep.to_json()}
        for c, out, rep in results
    ])


def cmd_count(args, cfg):
    raw, grouped = count_regimes(args.n, args.q, args.pairs)
    secs, text = estimate_cost(grouped, args.secs_per_item)
    _emit({"n": args.n, "q": args.q, "pairs": args.pairs, "raw": raw, "grouped": grouped,
           "secs_per_item": args.secs_per_item, "seconds": secs, "estimate": text})


def cmd_verify(args, cfg):
    A = _load_polymat(args.a, cfg)
    B = _load_polymat(args.b, cfg)
    _emit(verify_transform(A, B, grid=cfg.grid).to_json())


def _complex(obj):
    if isinstance(obj, dict):
        return complex(obj["re"], obj.get("im", 0.0))
    return complex(obj)


def filter_from_json(obj, tol=DEFAULT):
    """Build a filter callable from its JSON description.

    ``kind`` is ``elementary`` or ``squared`` (with ``alpha``), ``bivariate``
    (``alpha`` with positive imaginary part and a complex 2-vector ``w``) or
    ``statespace`` (real ``A, B, C, D``).
    """
    kind = obj.get("kind")
    if kind == "elementary":
        return ElementaryBlaschke(_complex(obj["alpha"]))
    if kind == "squared":
        return squared_from_pair(_complex(obj["alpha"]), tol)
    if kind == "bivariate":
        w = np.array([_complex(x) for x in obj["w"]])
        return build_bivariate(_complex(obj["alpha"]), w, tol)
    if kind == "statespace":
        return StateSpace2x2(*(np.asarray(obj[k], dtype=float) for k in "ABCD"))
    raise ValueError(f"unknown filter kind {kind!r}")


def cmd_blaschke(args, cfg):
    obj = _read_json(args.inp)
    f = filter_from_json(obj, cfg.tolerances)
    _emit({"kind": obj["kind"], "grid_points": cfg.grid,
           "max_allpass_defect": allpass_defect(f, cfg.grid)})


def _summary(report):
    lines = [f"case {report['case']}"]
    for run in report["runs"]:
        p = run["params"]
        lines.append(f"  a={p['a']} b={p['b']} c={p['c']} w={p['w']}: {run['status']}")
        for msg in run["console"]:
            lines.append(f"    R> {msg}")
        for name, val in run["checks"].items():
            lines.append(f"    {name}: {val}")
        contrast = run["correct_pipeline"]
        if "error" in contrast:
            lines.append(f"    correct pipeline: {contrast['error']}")
            continue
        for method, res in contrast.items():
            if "error" in res:
                lines.append(f"    correct {method}: {res['error']}")
            else:
                lines.append(f"    correct {method}: passed={res['passed']} "
                             f"spectral={res['max_spectral_defect']:.2e} imag={res['max_imag']:.2e}")
    return "\n".join(lines)


def cmd_replicate(args, cfg):
    report = diagnose(args.case, cfg.grid)
    _emit(report)
    print(_summary(report), file=sys.stderr)


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="allpass",
        description="All-pass transformations of real matrix polynomials.",
        epilog=CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_, **kw):
        return sub.add_parser(name, help=help_, parents=[common], description=help_,
                              formatter_class=argparse.RawDescriptionHelpFormatter, **kw)

    p = add("roots", "print the sorted root groups of a polynomial as JSON")
    p.add_argument("--in", dest="inp", required=True, help="PolyMat JSON file ('-' for stdin)")
    p.set_defaults(func=cmd_roots)

    p = add("mirror", "mirror the selected root groups", epilog=CONFIG_HELP)
    p.add_argument("--in", dest="inp", required=True, help="PolyMat JSON file ('-' for stdin)")
    p.add_argument("--config", required=True, help="0/1 flag per sorted root group")
    p.add_argument("--method", choices=METHODS, default="qr")
    p.add_argument("--out", help="also write the transformed PolyMat JSON here")
    p.set_defaults(func=cmd_mirror)

    p = add("enumerate", "transform into every regime and verify each", epilog=CONFIG_HELP)
    p.add_argument("--in", dest="inp", required=True, help="PolyMat JSON file ('-' for stdin)")
    p.add_argument("--method", choices=METHODS, default="qr")
    p.add_argument("--regime-cap", type=int, default=DEFAULT_REGIME_CAP,
                   help="refuse inputs with more regimes than this (default %(default)d)")
    p.add_argument("--workers", type=int, default=None, help="thread pool size")
    p.set_defaults(func=cmd_enumerate)

    p = add("count", "count regimes and estimate the cost of visiting them")
    p.add_argument("--n", type=int, required=True, help="dimension")
    p.add_argument("--q", type=_nonneg_int, required=True, help="MA order")
    p.add_argument("--pairs", type=_nonneg_int, default=0, help="complex-conjugate pairs")
    p.add_argument("--secs-per-item", type=_positive_float, default=1.0)
    p.set_defaults(func=cmd_count)

    p = add("verify", "compare the spectral densities of two polynomials")
    p.add_argument("--a", required=True, help="PolyMat JSON file")
    p.add_argument("--b", required=True, help="PolyMat JSON file")
    p.set_defaults(func=cmd_verify)

    p = add("blaschke", "all-pass checks on serialized filters")
    bsub = p.add_subparsers(dest="action", required=True, metavar="ACTION")
    c = bsub.add_parser("check", parents=[common],
                        help="print the max deviation from all-pass on the unit circle")
    c.add_argument("--in", dest="inp", required=True,
                   help='filter JSON, e.g. {"kind": "squared", "alpha": {"re": 0.5, "im": 0.5}}')
    c.set_defaults(func=cmd_blaschke)

    p = add("replicate-gmr", "replay the flawed reference procedure on a worked case")
    p.add_argument("--case", required=True, choices=sorted(CASES))
    p.set_defaults(func=cmd_replicate)
    return parser


def _setup_logging():
    level = os.environ.get("ALLPASS_LOG")
    if level:
        logging.basicConfig(level=level.upper(), stream=sys.stderr,
                            format="%(levelname)s %(name)s: %(message)s")


def main(argv=None):
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        cfg = CliConfig.from_args(args)
        log.debug("config %s", cfg)
        args.func(args, cfg)
    except (AllPassError, ValueError, KeyError, OSError, np.linalg.LinAlgError) as exc:
        body = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(body), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
