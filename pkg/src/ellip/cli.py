"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 internal consistency failure.
CSV output uses LF line endings, '.' decimals and always carries a header.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis, dseries, lattice_enum, sphharm
from .arith import Character, character_group, kronecker_character, principal_character
from .errors import EllipError, MismatchDetected
from .quadform import QuadraticForm, load_form, sphere


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


@dataclass
class RunConfig:
    command: str
    form: QuadraticForm | None
    jobs: int
    out: str | None
    params: dict = field(default_factory=dict)


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def parse_character(text: str) -> Character:
    """``principal:N``, ``kronecker:D`` or ``group:N:i`` (i-th element of the character group)."""
    parts = text.split(":")
    try:
        if parts[0] == "principal" and len(parts) <= 2:
            return principal_character(int(parts[1]) if len(parts) == 2 else 1)
        if parts[0] == "kronecker" and len(parts) == 2:
            return kronecker_character(int(parts[1]))
        if parts[0] == "group" and len(parts) == 3:
            return character_group(int(parts[1]))[int(parts[2])]
    except (ValueError, IndexError) as exc:
        raise UsageError(f"bad character {text!r}: {exc}")
    raise UsageError(f"bad character {text!r}; use principal:N, kronecker:D or group:N:i")


def _add_form(p: argparse.ArgumentParser) -> None:
    p.add_argument("--form", required=True, help="'sphere' or a JSON file with a Gram matrix")
    p.add_argument("--dim", type=int, help="sphere dimension d (with --form sphere)")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--jobs", type=int, help="worker threads (default: $ELLIP_JOBS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ellip", description="Rational points on integral ellipsoids.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("info", help="form invariants as JSON")
    _add_form(p)
    _add_common(p)

    p = sub.add_parser("count", help="per-height counts as CSV")
    _add_form(p)
    _add_common(p)
    p.add_argument("--tmax", type=int, required=True)
    p.add_argument("--points", metavar="PATH", help="also write every point (n, m_1..m_r) here")

    p = sub.add_parser("points", help="rational points of one height or up to tmax")
    _add_form(p)
    _add_common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--tmax", type=int)

    p = sub.add_parser("weyl", help="Weyl sums two ways as CSV")
    _add_form(p)
    _add_common(p)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--basis-index", type=int, default=0,
                   help="which element of the harmonic basis to sum (default 0)")

    p = sub.add_parser("identities", help="check a divisor-sum identity, JSON report")
    _add_common(p)
    p.add_argument("--which", required=True, choices=["ramanujan", "square", "delta", "odd", "mult"])
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--delta", type=int, default=1)
    p.add_argument("--M", type=int, default=2000)
    p.add_argument("--nmax", type=int, default=200, help="range of m, n for 'mult'")
    p.add_argument("--chi1", default="principal:1")
    p.add_argument("--chi2", default="principal:1")
    p.add_argument("--chi3", default="principal:1")

    p = sub.add_parser("discrepancy", help="cap discrepancy as CSV")
    _add_form(p)
    _add_common(p)
    p.add_argument("--tmax", type=int, required=True)
    p.add_argument("--caps", default="default", choices=["default"])
    p.add_argument("--grid", type=_int_list, help="cumulative T values (default: tmax only)")
    p.add_argument("--per-height", action="store_true",
                   help="one row per height n <= tmax coprime to the level instead")

    p = sub.add_parser("perron", help="truncated Perron integrals as CSV")
    _add_form(p)
    _add_common(p)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--H", type=_float_list, required=True)
    p.add_argument("--M", type=int, default=2000)

    p = sub.add_parser("char-table", help="values of every character mod N as CSV")
    _add_common(p)
    p.add_argument("--modulus", type=int, required=True)
    return parser


def resolve_form(args) -> QuadraticForm | None:
    if not hasattr(args, "form"):
        return None
    if args.form == "sphere":
        if args.dim is None:
            raise UsageError("--form sphere needs --dim")
        return sphere(args.dim)
    if args.dim is not None:
        raise UsageError("--dim only applies to --form sphere")
    path = Path(args.form)
    if not path.is_file():
        raise UsageError(f"--form: no such file {args.form!r}")
    return load_form(path)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------- commands

def cmd_info(cfg: RunConfig) -> str:
    return json.dumps(cfg.form.info()) + "\n"


def cmd_count(cfg: RunConfig) -> str:
    T = cfg.params["tmax"]
    recs = lattice_enum.omega_cumulative(cfg.form, T, cfg.jobs)
    path = cfg.params.get("points")
    if path:
        rows = []
        for n in range(1, T + 1):
            rows += [[n, *row.tolist()] for row in lattice_enum.omega_points(cfg.form, n)]
        header = ["n"] + [f"m{i + 1}" for i in range(cfg.form.r)]
        Path(path).write_text(_csv(header, rows))
    return _csv(["n", "rep_sq", "omega", "cumulative"],
                [[r.n, r.rep_sq, r.omega, r.cumulative] for r in recs])


def cmd_points(cfg: RunConfig) -> str:
    n0 = cfg.params.get("n")
    heights = [n0] if n0 is not None else range(1, cfg.params["tmax"] + 1)
    rows = []
    for n in heights:
        rows += [[n, *row.tolist()] for row in lattice_enum.omega_points(cfg.form, n)]
    return _csv(["n"] + [f"m{i + 1}" for i in range(cfg.form.r)], rows)


def cmd_weyl(cfg: RunConfig) -> str:
    basis = sphharm.harmonic_basis(cfg.form, cfg.params["degree"])
    idx = cfg.params["basis_index"]
    if not 0 <= idx < len(basis):
        raise UsageError(f"--basis-index must lie in [0, {len(basis) - 1}]")
    P = basis[idx]
    rows = []
    for n in range(1, cfg.params["nmax"] + 1):
        direct, mob = sphharm.weyl_sum(cfg.form, P, n)
        rows.append([n, direct.numerator, direct.denominator, mob.numerator, mob.denominator,
                     str(direct == mob).lower()])
    return _csv(["n", "weyl_direct_num", "weyl_direct_den", "weyl_mobius_num",
                 "weyl_mobius_den", "agree"], rows)


def cmd_identities(cfg: RunConfig) -> str:
    p = cfg.params
    chi1, chi2 = parse_character(p["chi1"]), parse_character(p["chi2"])
    which = p["which"]
    if which == "ramanujan":
        rep = dseries.verify_ramanujan(p["k"], p["l"], chi1, chi2, p["M"])
    elif which == "square":
        rep = dseries.verify_square_identity(p["k"], chi1, chi2, p["M"])
    elif which == "delta":
        rep = dseries.verify_delta_identity(p["k"], chi1, chi2, p["delta"], p["M"])
    elif which == "odd":
        chi3 = parse_character(p["chi3"])
        rep = dseries.verify_odd_identity(p["k"], p["j"], chi1, chi2, chi3, p["M"])
    else:
        N = p["nmax"]
        bad = [(m, n) for m in range(1, N + 1) for n in range(1, N + 1)
               if not dseries.verify_mult_relation(p["k"], chi1, chi2, m, n)]
        rep = dseries.IdentityReport(
            "mult", {"k": p["k"], "nmax": N, "chi1": p["chi1"], "chi2": p["chi2"]},
            len(bad), "exact", None, {"failures": bad[:20]})
    return rep.to_json() + "\n"


def cmd_discrepancy(cfg: RunConfig) -> str:
    p = cfg.params
    T = p["tmax"]
    caps = analysis.default_caps(cfg.form.d)
    if p["per_height"]:
        rep = analysis.rate_report(cfg.form, heights=range(1, T + 1), caps=caps)
        rows = rep.per_height
    else:
        grid = sorted(set(p["grid"] or [T]))
        if grid[0] < 1 or grid[-1] > T:
            raise UsageError("--grid values must lie in [1, tmax]")
        rows = analysis.rate_report(cfg.form, T_grid=grid, caps=caps).cumulative
    return _csv(["T_or_n", "npoints", "discrepancy"], [[n, c, _num(v)] for n, c, v in rows])


def cmd_perron(cfg: RunConfig) -> str:
    p = cfg.params
    T, M = p["T"], p["M"]
    recs = lattice_enum.omega_cumulative(cfg.form, int(T), cfg.jobs)
    exact = recs[-1].cumulative if recs else 0
    rows = []
    for H in p["H"]:
        res = analysis.perron_truncated(cfg.form, T, p["beta"], H, M, cfg.jobs)
        rows.append([_num(H), _num(res.real), _num(res.imag), exact, _num(abs(res.real - exact))])
    return _csv(["H", "re", "im", "exact", "abs_error"], rows)


def cmd_char_table(cfg: RunConfig) -> str:
    N = cfg.params["modulus"]
    if N < 1:
        raise UsageError("--modulus must be positive")
    rows = []
    for idx, chi in enumerate(character_group(N)):
        for a in range(N):
            v = complex(chi.values[a])
            rows.append([a, idx, _num(v.real), _num(v.imag)])
    return _csv(["residue", "char_index", "re", "im"], rows)


COMMANDS = {
    "info": cmd_info,
    "count": cmd_count,
    "points": cmd_points,
    "weyl": cmd_weyl,
    "identities": cmd_identities,
    "discrepancy": cmd_discrepancy,
    "perron": cmd_perron,
    "char-table": cmd_char_table,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        jobs = lattice_enum.resolve_jobs(getattr(args, "jobs", None))
        form = resolve_form(args)
        params = {k: v for k, v in vars(args).items()
                  if k not in ("command", "form", "dim", "jobs", "out")}
        cfg = RunConfig(args.command, form, jobs, args.out, params)
        text = COMMANDS[args.command](cfg)
    except (MismatchDetected, AssertionError) as exc:
        sys.stderr.write(f"internal consistency failure: {exc}\n")
        return 2
    except (UsageError, EllipError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    if cfg.out:
        with open(cfg.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
