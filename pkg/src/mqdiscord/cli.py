"""Command-line front end.

Subcommands::

    point       all measures at one (beta, xi, G) point
    sweep       one- or two-variable grid of points
    figures     data behind the discord / concurrence figures
    thresholds  admissibility and entanglement bounds for a slice
    verify      run the oracle and invariant suite

Exit codes: 0 success, 1 usage or domain error, 2 verification failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import coherence, discord, entanglement, verify
from .exceptions import DomainError
from .state import DimerParams

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

COLUMNS = (
    "beta", "xi", "d_tau", "g", "in_domain",
    "discord", "concurrence", "mutual_information", "classical_correlations",
    "entropy_a", "g_minus2", "g_0", "g_plus2", "magnetization",
)
SWEEP_VARS = ("beta", "xi", "g", "tau", "t")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    """Locale-independent 12-significant-digit rendering; -0 prints as 0."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x + 0.0:.12g}"


def _json_value(x):
    if isinstance(x, (int, np.integer)):
        return int(x)
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x + 0.0:.12g}")


def render(rows: list[dict], columns, fmt_name: str) -> str:
    if fmt_name == "json":
        data = [{c: _json_value(r.get(c)) for c in columns} for r in rows]
        return json.dumps(data, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([fmt(r[c]) if r.get(c) is not None else "" for c in columns])
    return buf.getvalue()


# -- point evaluation ------------------------------------------------------

def resolve(beta=None, xi=None, g=None, coupling=None, tau=None,
            delta: float = 1.0, t: float = 0.0) -> DimerParams:
    """Turn exactly two of (beta, xi, G) into full run parameters.

    ``xi`` may instead come from ``(coupling, tau)``; coupling defaults to 1.
    """
    if xi is not None and tau is not None:
        raise UsageError("give either --xi or --tau (with --coupling), not both")
    if coupling is not None and tau is None:
        raise UsageError("--coupling needs --tau")
    if tau is not None:
        phase_params = DimerParams(beta=0.0, coupling=1.0 if coupling is None else coupling, tau=tau)
        xi = phase_params.xi
    given = [name for name, v in (("beta", beta), ("xi", xi), ("g", g)) if v is not None]
    if len(given) != 2:
        raise UsageError(f"need exactly two of beta, xi (or tau), G; got {given or 'none'}")

    if g is None:
        pass
    elif beta is None:
        beta = coherence.beta_from_g(g, xi, allow_pure=True)
    else:
        xi = coherence.xi_from_g(beta, g)

    if beta < 0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    if not 0 <= xi <= 1:
        raise DomainError(f"xi must lie in [0, 1], got {xi}")
    if tau is not None:
        return DimerParams(beta=beta, coupling=1.0 if coupling is None else coupling,
                           tau=tau, delta=delta, t_evolution=t)
    return DimerParams.from_xi(beta, xi, delta=delta, t_evolution=t)


def point_record(params: DimerParams) -> dict:
    beta, xi = params.beta, params.xi
    spec = coherence.coherence_spectrum(params)
    return {
        "beta": beta,
        "xi": xi,
        "d_tau": params.phase % (2.0 * math.pi),
        "g": spec.g_plus2,
        "in_domain": 1,
        "discord": discord.discord_closed(beta, xi),
        "concurrence": entanglement.concurrence_beta_xi(beta, xi),
        "mutual_information": discord.mutual_information(beta, xi),
        "classical_correlations": discord.classical_correlations(beta, xi),
        "entropy_a": discord.reduced_entropy(beta, xi),
        "g_minus2": spec.g_minus2,
        "g_0": spec.g_0,
        "g_plus2": spec.g_plus2,
        "magnetization": coherence.magnetization_fourier(params),
    }


def out_of_domain_record(inputs: dict) -> dict:
    row = {c: math.nan for c in COLUMNS}
    for key in ("beta", "xi", "g"):
        if inputs.get(key) is not None:
            row[key] = inputs[key]
    row["in_domain"] = 0
    return row


def evaluate(inputs: dict) -> dict:
    """One output row; domain failures become a marked row."""
    try:
        return point_record(resolve(**inputs))
    except DomainError:
        return out_of_domain_record(inputs)


# -- sweeps ----------------------------------------------------------------

def _axis_values(start: float, stop: float, count: int) -> np.ndarray:
    if count < 2:
        raise UsageError("--count must be at least 2")
    if not start < stop:
        raise UsageError("--start must be below --stop")
    return np.linspace(start, stop, count)


def sweep_rows(fixed: dict, axes: list[tuple[str, np.ndarray]]) -> list[dict]:
    names = [name for name, _ in axes]
    if len(set(names)) != len(names):
        raise UsageError("each --var may appear once")
    for name in names:
        if fixed.get(name) is not None:
            raise UsageError(f"--{name} is both swept and fixed")
    rows = []
    for combo in np.array(np.meshgrid(*[v for _, v in axes], indexing="ij")).reshape(len(axes), -1).T:
        inputs = dict(fixed)
        for name, value in zip(names, combo):
            inputs[name] = float(value)
        rows.append(evaluate(inputs))
    return rows


# -- figures ---------------------------------------------------------------

FIG2_BETAS = (1.0, 2.0, 5.0)
FIG_GS = (0.1, 0.25, 0.4)
FIG3_XIS = (0.9, math.sqrt(2.0) / 2.0, 0.0)
FIG_POINTS = 101


def figure_tables() -> dict[str, list[dict]]:
    tables: dict[str, list[dict]] = {}
    betas = np.linspace(0.0, 5.0, 51)
    xis = np.linspace(0.0, 1.0, 51)
    tables["fig1"] = sweep_rows({}, [("beta", betas), ("xi", xis)])
    tables["fig2a"] = [evaluate({"beta": b, "g": float(g)})
                       for b in FIG2_BETAS
                       for g in np.linspace(0.0, entanglement.g1_max(b), FIG_POINTS)]
    tables["fig2b"] = [evaluate({"beta": float(b), "g": g})
                       for g in FIG_GS
                       for b in np.linspace(entanglement.beta1_min(g), 6.0, FIG_POINTS)]
    tables["fig3a"] = [evaluate({"g": float(g), "xi": x})
                       for x in FIG3_XIS
                       for g in np.linspace(0.0, entanglement.g2_max(x), FIG_POINTS)]
    tables["fig3b"] = [evaluate({"g": g, "xi": float(x)})
                       for g in FIG_GS
                       for x in np.linspace(0.0, entanglement.xi2_max(g), FIG_POINTS)]
    return tables


def caption_values() -> dict:
    """Every extremal value quoted alongside the figures, recomputed."""
    r = lambda xs: [_json_value(x) for x in xs]  # noqa: E731
    g1 = [entanglement.g1_max(b) for b in FIG2_BETAS]
    b1 = [entanglement.beta1_min(g) for g in FIG_GS]
    g2 = [entanglement.g2_max(x) for x in FIG3_XIS]
    x2 = [entanglement.xi2_max(g) for g in FIG_GS]
    return {
        "fig2a": {
            "beta": r(FIG2_BETAS),
            "g1_max": r(g1),
            "discord_at_g1_max": r(discord.discord_beta_g(b, g) for b, g in zip(FIG2_BETAS, g1)),
            "concurrence_at_g1_max": r(entanglement.concurrence_beta_g(b, g) for b, g in zip(FIG2_BETAS, g1)),
            "g1_min": r(entanglement.g1_min(b) for b in FIG2_BETAS),
        },
        "fig2b": {
            "g": r(FIG_GS),
            "beta1_min": r(b1),
            "discord_at_beta1_min": r(discord.discord_beta_g(b, g) for b, g in zip(b1, FIG_GS)),
            "concurrence_at_beta1_min": r(entanglement.concurrence_beta_g(b, g) for b, g in zip(b1, FIG_GS)),
            "beta2_min": r(entanglement.beta2_min(g) for g in FIG_GS),
            "entangled_above_beta": r(max(a, entanglement.beta2_min(g)) for a, g in zip(b1, FIG_GS)),
        },
        "fig3a": {
            "xi": r(FIG3_XIS),
            "g2_max": r(g2),
            "discord_at_g2_max": r(discord.discord_g_xi(g, x) for g, x in zip(g2, FIG3_XIS)),
            "concurrence_at_g2_max": r(entanglement.concurrence_g_xi(g, x) for g, x in zip(g2, FIG3_XIS)),
            "g2_min": r(entanglement.g2_min(x) for x in FIG3_XIS),
        },
        "fig3b": {
            "g": r(FIG_GS),
            "xi2_max": r(x2),
            "discord_at_xi2_max": r(discord.discord_g_xi(g, x) for g, x in zip(FIG_GS, x2)),
            "concurrence_at_xi2_max": r(entanglement.concurrence_g_xi(g, x) for g, x in zip(FIG_GS, x2)),
            "xi2_min": r(entanglement.xi2_min(g) for g in FIG_GS),
        },
    }


# -- argument handling -----------------------------------------------------

def _add_point_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta", type=float, help="dimensionless inverse temperature")
    p.add_argument("--xi", type=float, help="|cos(D tau)| in [0, 1]")
    p.add_argument("--g", type=float, help="second-order coherence intensity")
    p.add_argument("--coupling", type=float, help="dipolar coupling D (default 1 with --tau)")
    p.add_argument("--tau", type=float, help="preparation time")
    p.add_argument("--delta", type=float, default=1.0, help="evolution-period constant")
    p.add_argument("--t", type=float, default=0.0, help="evolution time")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mqdiscord", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("point", help="all measures at one point")
    _add_point_flags(p)

    p = sub.add_parser("sweep", help="grid of points over one or two variables")
    _add_point_flags(p)
    p.add_argument("--var", action="append", choices=SWEEP_VARS, required=True,
                   help="swept variable; repeat for a 2-D grid")
    p.add_argument("--start", action="append", type=float, required=True)
    p.add_argument("--stop", action="append", type=float, required=True)
    p.add_argument("--count", action="append", type=int, required=True)
    p.add_argument("--out", type=Path, help="write to a file instead of stdout")

    p = sub.add_parser("figures", help="write figure data and caption values")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("thresholds", help="bounds for a beta, G and/or xi slice")
    p.add_argument("--beta", type=float)
    p.add_argument("--g", type=float)
    p.add_argument("--xi", type=float)
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("verify", help="run every oracle and invariant check")
    p.add_argument("--count", type=int, default=100, help="grid density (>= 4)")
    return parser


def _point_inputs(args) -> dict:
    return {"beta": args.beta, "xi": args.xi, "g": args.g, "coupling": args.coupling,
            "tau": args.tau, "delta": args.delta, "t": args.t}


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def cmd_point(args) -> int:
    record = point_record(resolve(**_point_inputs(args)))
    _write(render([record], COLUMNS, args.format), None)
    return EXIT_OK


def cmd_sweep(args) -> int:
    n = len(args.var)
    if not (len(args.start) == len(args.stop) == len(args.count) == n) or n > 2:
        raise UsageError("give one --start/--stop/--count per --var (at most two)")
    axes = [(v, _axis_values(a, b, c)) for v, a, b, c in zip(args.var, args.start, args.stop, args.count)]
    fixed = _point_inputs(args)
    # tau needs a coupling (default 1); t is carried through DimerParams
    axes_named = dict(axes)
    if "xi" in axes_named and fixed["tau"] is not None:
        raise UsageError("--tau conflicts with sweeping xi")
    if "t" in axes_named:
        fixed.pop("t")
    rows = sweep_rows(fixed, axes)
    _write(render(rows, COLUMNS, args.format), args.out)
    return EXIT_OK


def cmd_figures(args) -> int:
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    ext = "json" if args.format == "json" else "csv"
    for name, rows in figure_tables().items():
        (out / f"{name}.{ext}").write_text(render(rows, COLUMNS, args.format), encoding="utf-8")
    (out / "thresholds.json").write_text(json.dumps(caption_values(), indent=1) + "\n",
                                         encoding="utf-8")
    return EXIT_OK


def cmd_thresholds(args) -> int:
    if args.beta is None and args.g is None and args.xi is None:
        raise UsageError("give at least one of --beta, --g, --xi")
    report = entanglement.thresholds(beta=args.beta, g=args.g, xi=args.xi).as_dict()
    columns = [k for k, v in report.items() if v is not None]
    if args.format == "json":
        text = json.dumps({k: _json_value(report[k]) for k in columns}, indent=1) + "\n"
    else:
        text = render([report], columns, "csv")
    _write(text, None)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.count < 4:
        raise UsageError("--count must be at least 4")
    results = verify.run_checks(args.count)
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


COMMANDS = {"point": cmd_point, "sweep": cmd_sweep, "figures": cmd_figures,
            "thresholds": cmd_thresholds, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        print(f"mqdiscord {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"mqdiscord {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
