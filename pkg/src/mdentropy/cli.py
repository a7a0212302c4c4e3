"""Command-line front end: ``mdentropy <command> [options]``.

Exit codes: 0 success, 2 validation error, 3 size guard exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

import numpy as np

from . import __version__, bounds, closed_forms, cluster, constants, lattice, series
from .polys import fmt_fraction

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SIZE_GUARD = 3

UNITS_NOTE = "# units: nats per site"
FLAG_NOTE = "# upper bounds: rigorous for d=2, conditional on the subset-entropy conjecture for d>=3"


@dataclass
class RunConfig:
    """Validated options shared by every command."""

    command: str
    fmt: str = "csv"
    out: Optional[str] = None
    precision: str = "table"
    args: dict = field(default_factory=dict)

    def number(self, x: float) -> str:
        if self.precision == "full":
            return repr(float(x))
        return f"{float(x):.5f}"


# ------------------------------------------------------------------ output


def _csv(rows: Sequence[Sequence[str]], header: Sequence[str], notes: Sequence[str] = (UNITS_NOTE,)) -> str:
    buf = io.StringIO()
    for note in notes:
        buf.write(note + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(doc: dict) -> str:
    return json.dumps({"schema": "1", **doc}, indent=2) + "\n"


# ----------------------------------------------------------------- parsing


def _p_values(ns: argparse.Namespace) -> List[float]:
    if ns.p is not None:
        ps = list(ns.p)
    else:
        ps = list(np.linspace(0.0, 1.0, ns.p_grid))
    for p in ps:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p={p} outside [0, 1]")
    return [float(p) for p in ps]


def _point(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad site {text!r}; use comma-separated integers like 1,2")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad rational {text!r}; use num/den")


def _graph_args(sp: argparse.ArgumentParser):
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--box", type=int, nargs="+", metavar="M", help="box side lengths")
    g.add_argument("--torus", type=int, nargs="+", metavar="M", help="torus side lengths")
    sp.add_argument("--delete", type=_point, action="append", default=[], metavar="X,Y,..",
                    help="remove a site from the box (1-based, repeatable)")
    sp.add_argument("--method", choices=("auto", "brute", "transfer"), default="auto")
    sp.add_argument("--max-sites", type=int, default=lattice.BRUTE_FORCE_MAX_SITES)
    sp.add_argument("--max-cross-section", type=int, default=lattice.TRANSFER_MAX_CROSS_SECTION)


def _p_args(sp: argparse.ArgumentParser):
    sp.add_argument("--p", type=float, nargs="+", help="densities in [0, 1]")
    sp.add_argument("--p-grid", type=int, default=11, help="equispaced grid size when --p is absent")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mdentropy", description="Monomer-dimer entropy laboratory.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", help="write to this path instead of stdout")
    common.add_argument("--precision", choices=("table", "full"), default="table",
                        help="5 decimals (table) or full binary64")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("count", parents=[common], help="exact matching counts of a finite graph")
    _graph_args(sp)

    sp = sub.add_parser("entropy", parents=[common], help="log(count)/sites for each dimer number")
    _graph_args(sp)
    sp.add_argument("--ell", type=int, nargs="+")

    sp = sub.add_parser("bounds", parents=[common], help="lower and upper bounds in dimension d")
    sp.add_argument("--d", type=int, required=True)
    _p_args(sp)
    sp.add_argument("--u-range", choices=("low", "high"), default="low")

    sp = sub.add_parser("chain", parents=[common], help="bounds for every d from 2 to d-target")
    sp.add_argument("--d-target", type=int, required=True)
    _p_args(sp)
    sp.add_argument("--u-range", choices=("low", "high"), default="low")

    sub.add_parser("table7_3", parents=[common], help="expansion, bounds and reference for d=2")

    sp = sub.add_parser("sequences", parents=[common], help="partial sums of the p expansion")
    sp.add_argument("--d", type=int, nargs="+", default=[2, 3])
    sp.add_argument("--p", type=float, default=1.0)

    sp = sub.add_parser("jbar", parents=[common], help="cluster coefficient Jbar_s")
    sp.add_argument("s", type=int)
    sp.add_argument("--d", type=int, help="evaluate at one dimension instead of interpolating")
    sp.add_argument("--long-run", action="store_true", help="allow s=6 (slow)")

    sp = sub.add_parser("series", parents=[common], help="1/d expansion from the saddle point")
    sp.add_argument("--K", type=int, default=3)
    sp.add_argument("--pmax", type=int)

    sp = sub.add_parser("residual", parents=[common], help="ansatz residual and sign conditions")
    sp.add_argument("a", type=_rational)
    sp.add_argument("b", type=_rational)
    sp.add_argument("c", type=_rational)

    sp = sub.add_parser("lamc-check", parents=[common], help="recursive bound versus omega_2d")
    sp.add_argument("--d-max", type=int, default=6)
    sp.add_argument("--points", type=int, default=101)

    sp = sub.add_parser("conjecture-probe", parents=[common],
                        help="punctured-box entropies against the upper bound curve")
    sp.add_argument("--box", type=int, nargs="+", required=True)
    sp.add_argument("--delete", type=_point, action="append", default=None,
                    help="sites to remove; default probes every single-site deletion")
    return ap


# ---------------------------------------------------------------- commands


def _count_table(ns) -> lattice.CountTable:
    kind = "torus" if ns.torus else "box"
    dims = ns.torus or ns.box
    g = lattice.build_graph(kind, dims, ns.delete)
    method = ns.method
    if method == "auto":
        method = "brute" if kind == "torus" or g.nsites <= 16 else "transfer"
    if method == "transfer":
        if kind == "torus":
            raise ValueError("transfer counting supports boxes only")
        return lattice.matching_counts_transfer(dims, ns.delete, ns.max_cross_section)
    return lattice.matching_counts_bruteforce(g, ns.max_sites)


def cmd_count(cfg: RunConfig, ns) -> str:
    t = _count_table(ns)
    if cfg.fmt == "json":
        return t.to_json() + "\n"
    return _csv([[str(ell), str(c)] for ell, c in enumerate(t.counts)], ["ell", "count"], ())


def cmd_entropy(cfg: RunConfig, ns) -> str:
    t = _count_table(ns)
    ells = ns.ell if ns.ell else [ell for ell, c in enumerate(t.counts) if c]
    rows = [(ell, lattice.density(t, ell), lattice.entropy_estimate(t, ell)) for ell in ells]
    if cfg.fmt == "json":
        return _json({"dims": list(t.dims), "kind": t.kind, "nsites": t.nsites,
                      "rows": [{"ell": e, "p": p, "entropy": v} for e, p, v in rows]})
    return _csv([[str(e), cfg.number(p), cfg.number(v)] for e, p, v in rows], ["ell", "p", "entropy"])


def _reports_out(cfg: RunConfig, reports: List[bounds.BoundReport]) -> str:
    if cfg.fmt == "json":
        return _json({"rows": [
            {**{k: getattr(r, k) for k in r.__dataclass_fields__}, "conditional": r.conditional}
            for r in reports
        ]})
    return _csv([r.csv_row(cfg.number) for r in reports], bounds.BoundReport.CSV_HEADER,
                (UNITS_NOTE, FLAG_NOTE))


def cmd_bounds(cfg: RunConfig, ns) -> str:
    return _reports_out(cfg, bounds.chain(ns.d, _p_values(ns), u_range=ns.u_range))


def cmd_chain(cfg: RunConfig, ns) -> str:
    return _reports_out(cfg, bounds.chain(ns.d_target, _p_values(ns), u_range=ns.u_range, all_levels=True))


def table7_3_rows() -> List[tuple]:
    """``(p, expansion, lower, reference, upper B)`` at the tabulated densities."""
    out = []
    for p, _, _, ref, _ in constants.TABLE_LAMBDA2:
        exp = closed_forms.expansion_eval(2, p, kmax=6)
        lb, _ = bounds.lower_bound(2, p)
        ub, _ = bounds.upper_bound_B(2, p)
        out.append((p, exp, lb, ref, ub))
    return out


def cmd_table7_3(cfg: RunConfig, ns) -> str:
    rows = table7_3_rows()
    header = ["p", "expansion", "lb", "exact_ref", "ubB"]
    if cfg.fmt == "json":
        return _json({"d": 2, "rows": [dict(zip(header, r)) for r in rows]})
    return _csv([[cfg.number(x) for x in r] for r in rows], header,
                (UNITS_NOTE, "# d=2; upper bound rigorous; exact_ref from corner-transfer values"))


def sequence_values(d: int, p: float = 1.0) -> List[float]:
    return [closed_forms.expansion_eval(d, p, kmax=k) for k in range(2, 7)]


def cmd_sequences(cfg: RunConfig, ns) -> str:
    rows = [(d, k, v) for d in ns.d for k, v in zip(range(2, 7), sequence_values(d, ns.p))]
    if cfg.fmt == "json":
        return _json({"p": ns.p, "rows": [{"d": d, "kmax": k, "value": v} for d, k, v in rows]})
    fmt = cfg.number if cfg.precision == "full" else (lambda x: f"{x:.4f}")
    return _csv([[str(d), str(k), fmt(v)] for d, k, v in rows], ["d", "kmax", "value"])


def cmd_jbar(cfg: RunConfig, ns) -> str:
    if ns.d is not None:
        v = cluster.JBarValue(ns.s, d=ns.d, value=cluster.jbar(ns.s, ns.d, ns.long_run))
        text = fmt_fraction(v.value)
    else:
        v = cluster.jbar_poly(ns.s, ns.long_run)
        text = str(v.poly)
    if cfg.fmt == "json":
        return json.dumps(v.to_json(), indent=2) + "\n"
    return text + "\n"


def cmd_series(cfg: RunConfig, ns) -> str:
    s = series.saddle_solve(K=ns.K, pmax=ns.pmax)
    if cfg.fmt == "json":
        return json.dumps(s.to_json(), indent=2) + "\n"
    lines = [f"c_{k}(p) = {s.coeff(k)}" for k in range(1, ns.K + 1)]
    return "\n".join(lines + [f"lambda_d(p) ~ {s}"]) + "\n"


def cmd_residual(cfg: RunConfig, ns) -> str:
    r = series.residual_check(ns.a, ns.b, ns.c)
    v = series.theorem62_conditions(ns.a, ns.b, ns.c)
    if cfg.fmt == "json":
        return _json({"residual": r.to_json(), "conditions": v.as_dict()})
    marks = " ".join(f"{k}={'pass' if getattr(v, k) else 'fail'}" for k in "ABC")
    return f"residual = {r}\n{marks}\n"


def lamc_deviation(d: int, points: int = 101) -> float:
    base = bounds.lamc_curve(d - 1)
    return max(abs(bounds.recur_bound(d, p, base) - closed_forms.lamc_omega(d, p))
               for p in np.linspace(0.0, 1.0, points))


def cmd_lamc_check(cfg: RunConfig, ns) -> str:
    rows = [(d, lamc_deviation(d, ns.points)) for d in range(2, ns.d_max + 1)]
    if cfg.fmt == "json":
        return _json({"rows": [{"d": d, "max_abs_deviation": e} for d, e in rows]})
    return _csv([[str(d), f"{e:.3e}"] for d, e in rows], ["d", "max_abs_deviation"])


def conjecture_probe(dims: Sequence[int], deletions: Optional[Sequence[Sequence[tuple]]] = None) -> List[dict]:
    """Entropy of punctured boxes against the best upper curve in that dimension.

    ``margin`` is ``upper - estimate``; negative values would contradict the
    finite-subset entropy conjecture (up to finite-size effects).
    """
    dims = tuple(dims)
    d = len(dims)
    if deletions is None:
        g = lattice.build_graph("box", dims)
        deletions = [(v,) for v in g.vertices]
    if d == 1:
        upper = bounds.EXACT_LAMBDA1
    else:
        upper = bounds.chained_upper_curve(d, samples=513, grid=512)
    rows = []
    for holes in deletions:
        g = lattice.build_graph("box", dims, holes)
        t = lattice.matching_counts_bruteforce(g)
        for ell, c in enumerate(t.counts):
            if not c or ell == 0:
                continue
            p = lattice.density(t, ell)
            est = lattice.entropy_estimate(t, ell)
            ub = float(upper(p))
            rows.append({"deleted": [list(h) for h in holes], "ell": ell, "p": p,
                         "estimate": est, "upper": ub, "margin": ub - est})
    return rows


def cmd_conjecture_probe(cfg: RunConfig, ns) -> str:
    dels = None if ns.delete is None else [ns.delete]
    rows = conjecture_probe(ns.box, dels)
    if cfg.fmt == "json":
        return _json({"dims": ns.box, "rows": rows})
    return _csv(
        [[" ".join(",".join(map(str, h)) for h in r["deleted"]), str(r["ell"]), cfg.number(r["p"]),
          cfg.number(r["estimate"]), cfg.number(r["upper"]), cfg.number(r["margin"])] for r in rows],
        ["deleted", "ell", "p", "estimate", "upper", "margin"],
        (UNITS_NOTE, FLAG_NOTE),
    )


COMMANDS: dict[str, Callable[[RunConfig, argparse.Namespace], str]] = {
    "count": cmd_count,
    "entropy": cmd_entropy,
    "bounds": cmd_bounds,
    "chain": cmd_chain,
    "table7_3": cmd_table7_3,
    "sequences": cmd_sequences,
    "jbar": cmd_jbar,
    "series": cmd_series,
    "residual": cmd_residual,
    "lamc-check": cmd_lamc_check,
    "conjecture-probe": cmd_conjecture_probe,
}

DEFAULT_FORMAT = {"count": "json"}


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(ns.command, ns.format or DEFAULT_FORMAT.get(ns.command, "csv"), ns.out, ns.precision)
    try:
        text = COMMANDS[ns.command](cfg, ns)
    except lattice.SizeGuardError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SIZE_GUARD
    except (ValueError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
