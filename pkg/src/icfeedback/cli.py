"""Command-line surface: rate queries, Monte Carlo runs, GDoF ladders, figures.

Subcommands: rate, simulate, gdof, figure.  SNR is given in dB and converted
internally (P = 10^(snr_db/10)).  Flag precedence is flags > config file >
defaults; the config file is a flat key=value text format where keys match
the long flag names with dashes replaced by underscores.

Exit codes: 0 success, 2 infeasible/undefined, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from importlib import resources

from . import codec, rates
from .channel import ChannelParams
from .errors import (
    ICFeedbackError,
    RateInfeasible,
    UndefinedAtOne,
    UnknownFigure,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_USAGE = 64

FIGURE_IDS = (
    "rate-vs-alpha-high-snr",
    "rate-vs-alpha-low-snr",
    "gdof-curve",
    "strong-ic",
    "weak-ic",
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_config(path: str) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {line!r}")
            key, val = line.split("=", 1)
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _apply_config(args: argparse.Namespace, spec: dict) -> None:
    """Fill unset flags from the config file, then from defaults."""
    cfg = _read_config(args.config) if args.config else {}
    for key, (cast, default) in spec.items():
        if getattr(args, key, None) is None:
            if key in cfg:
                setattr(args, key, cast(cfg[key]))
            else:
                setattr(args, key, default)


def _snr_to_power(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


def _solve_rate(scheme: str, m: int, a: float, p: float) -> rates.RateSolution:
    if scheme == "no-interference":
        return rates.rate_no_interference(p, m)
    if scheme == "kramer":
        if a == 1.0:
            return rates.kramer_equal_gain(m, p)
        if m == 2:
            return rates.kramer_two_user(a, p)
        raise RateInfeasible("the equal-gain code needs a = 1 when M > 2")
    if scheme == "proposed":
        if a == 0.0:
            return rates.rate_no_interference(p, m)
        if m == 2:
            return rates.rate_two_user(a, p)
        if a == 1.0:
            return rates.kramer_equal_gain(m, p)
        return rates.theorem3_rate(a, p, m)
    raise ValueError(f"unknown scheme {scheme!r}")


def cmd_rate(args) -> int:
    p = _snr_to_power(args.snr_db)
    if (args.alpha is None) == (args.a is None):
        sys.stderr.write("rate: exactly one of --alpha / --a is required\n")
        return EXIT_USAGE
    a = args.a if args.a is not None else p ** ((args.alpha - 1.0) / 2.0)
    try:
        sol = _solve_rate(args.scheme, args.M, a, p)
    except (RateInfeasible, ICFeedbackError) as exc:
        sys.stderr.write(f"rate: {exc}\n")
        return EXIT_INFEASIBLE
    d = sol.diagnostics
    print(f"scheme={args.scheme} M={args.M} a={a:.10g} P={p:.10g}")
    print(f"R_sym={sol.r_sym:.12g} bits/channel use")
    print(f"b={sol.b:.12g} beta={sol.beta:.12g} lambda={sol.lam:.12g}")
    print(
        "residuals: eq94={r94:.3e} eq97={r97:.3e} feasible={feasible}".format(**d)
    )
    return EXIT_OK if d["feasible"] else EXIT_INFEASIBLE


def _build_schedule(params: ChannelParams, horizon: int) -> codec.CodeSchedule:
    if params.a == 0.0:
        return codec.schedule_no_interference(params.P, horizon, params.M)
    sol = _solve_rate("proposed", params.M, params.a, params.P)
    return codec.schedule_from_solution(params, sol, horizon)


def cmd_simulate(args) -> int:
    p = _snr_to_power(args.snr_db)
    params = ChannelParams(M=args.M, a=args.a, P=p)
    try:
        schedule = _build_schedule(params, args.horizon)
        result = codec.run_session(
            params,
            schedule,
            args.horizon,
            args.rate_fraction,
            args.trials,
            args.seed,
            retransmit=args.retransmit,
        )
    except RateInfeasible as exc:
        sys.stderr.write(f"simulate: {exc}\n")
        return EXIT_INFEASIBLE
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["m", "p_e", "rate_bits", "avg_power", "retransmissions"])
    for m in range(params.M):
        if result.trials:
            writer.writerow(
                [
                    m + 1,
                    f"{result.error_rate[m]:.10g}",
                    f"{result.rate_bits[m]:.10g}",
                    f"{result.avg_power[m]:.10g}",
                    int(result.retransmissions[m]),
                ]
            )
    _write_text(args.out, out.getvalue())
    return EXIT_OK


def cmd_gdof(args) -> int:
    try:
        target = rates.gdof_closed_form(args.alpha)
        ladder = rates.gdof_numeric(args.alpha, args.M, args.snr_ladder)
    except UndefinedAtOne as exc:
        sys.stderr.write(f"gdof: {exc}\n")
        return EXIT_INFEASIBLE
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["P", "d_hat", "target", "tol"])
    for p, d_hat in ladder:
        writer.writerow([f"{p:.10g}", f"{d_hat:.10g}", f"{target:.10g}", "0.05"])
    _write_text(args.out, out.getvalue())
    return EXIT_OK


def _reference_rows(name: str) -> list[tuple[float, str, float]]:
    """Bundled externally-sourced comparison curves (display only)."""
    path = resources.files("icfeedback").joinpath(f"reference_data/{name}")
    rows = []
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            x, scheme, value = line.split(",")
            if x == "x":
                continue
            rows.append((float(x), scheme, float(value)))
    return rows


def _figure_rows(figure_id: str, snr_db: float | None, m: int | None):
    if figure_id in ("rate-vs-alpha-high-snr", "rate-vs-alpha-low-snr"):
        snr = snr_db if snr_db is not None else (25.0 if "high" in figure_id else 0.0)
        p = _snr_to_power(snr)
        alphas = [round(0.1 * i, 10) for i in range(1, 26)]
        rows = []
        for alpha in alphas:
            a = p ** ((alpha - 1.0) / 2.0)
            rows.append((alpha, "proposed", rates.rate_two_user(a, p).r_sym))
            rows.append((alpha, "kramer", rates.kramer_two_user(a, p).r_sym))
        ref = "suh_tse_high_snr.csv" if "high" in figure_id else "suh_tse_low_snr.csv"
        rows.extend(_reference_rows(ref))
        return rows, "alpha"
    if figure_id == "gdof-curve":
        rows = []
        for alpha in [round(0.05 * i, 10) for i in range(1, 20)]:
            rows.append((alpha, "gdof", rates.gdof_closed_form(alpha)))
        for alpha in [round(1.0 + 0.05 * i, 10) for i in range(1, 41)]:
            rows.append((alpha, "gdof", rates.gdof_closed_form(alpha)))
        return rows, "alpha"
    if figure_id in ("strong-ic", "weak-ic"):
        mm = m if m is not None else 4
        alpha = 2.0 if figure_id == "strong-ic" else 0.5
        rows = []
        for snr in range(10, 65, 5):
            p = _snr_to_power(float(snr))
            a = p ** ((alpha - 1.0) / 2.0)
            rows.append((float(snr), "proposed", rates.theorem3_rate(a, p, mm).r_sym))
        ref = "mtp_strong_ic.csv" if figure_id == "strong-ic" else "mtp_weak_ic.csv"
        rows.extend(_reference_rows(ref))
        return rows, "snr_db"
    raise UnknownFigure(f"unrecognized figure id {figure_id!r}")


def cmd_figure(args) -> int:
    if args.id not in FIGURE_IDS:
        sys.stderr.write(f"figure: unknown figure id {args.id!r}\n")
        return EXIT_USAGE
    try:
        rows, x_name = _figure_rows(args.id, args.snr_db, args.M)
    except UnknownFigure as exc:
        sys.stderr.write(f"figure: {exc}\n")
        return EXIT_USAGE
    if not rows:
        sys.stderr.write("figure: empty grid\n")
        return EXIT_INFEASIBLE
    rows.sort(key=lambda r: (r[0], r[1]))
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["x", "scheme", "value"])
    for x, scheme, value in rows:
        writer.writerow([f"{x:.10g}", scheme, f"{value:.10g}"])
    _write_text(args.out, out.getvalue())
    return EXIT_OK


def _write_text(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(",", " ").split()]


def build_parser() -> _Parser:
    parser = _Parser(prog="icfb", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--config", type=str, default=None)

    p_rate = sub.add_parser("rate", help="closed-form / solver rate query")
    p_rate.add_argument("--M", type=int, default=None)
    p_rate.add_argument("--snr-db", type=float, default=None)
    p_rate.add_argument("--a", type=float, default=None)
    p_rate.add_argument("--alpha", type=float, default=None)
    p_rate.add_argument(
        "--scheme", choices=("proposed", "kramer", "no-interference"), default=None
    )
    common(p_rate)

    p_sim = sub.add_parser("simulate", help="Monte Carlo feedback-code session")
    p_sim.add_argument("--M", type=int, default=None)
    p_sim.add_argument("--a", type=float, default=None)
    p_sim.add_argument("--snr-db", type=float, default=None)
    p_sim.add_argument("--horizon", type=int, default=None)
    p_sim.add_argument("--rate-fraction", type=float, default=None)
    p_sim.add_argument("--trials", type=int, default=None)
    p_sim.add_argument("--retransmit", action="store_true")
    common(p_sim)

    p_gdof = sub.add_parser("gdof", help="generalized degrees-of-freedom ladder")
    p_gdof.add_argument("--alpha", type=float, default=None)
    p_gdof.add_argument("--M", type=int, default=None)
    p_gdof.add_argument("--snr-ladder", type=_float_list, default=None)
    common(p_gdof)

    p_fig = sub.add_parser("figure", help="figure data as CSV")
    p_fig.add_argument("--id", type=str, default=None)
    p_fig.add_argument("--M", type=int, default=None)
    p_fig.add_argument("--snr-db", type=float, default=None)
    common(p_fig)
    return parser


_DEFAULTS = {
    "rate": {
        "M": (int, 2),
        "snr_db": (float, 10.0),
        "scheme": (str, "proposed"),
        "seed": (int, 0),
    },
    "simulate": {
        "M": (int, 2),
        "a": (float, 0.0),
        "snr_db": (float, 10.0),
        "horizon": (int, 60),
        "rate_fraction": (float, 0.8),
        "trials": (int, 1000),
        "seed": (int, 0),
    },
    "gdof": {
        "alpha": (float, 2.0),
        "M": (int, 2),
        "snr_ladder": (_float_list, [1e3, 1e6, 1e9]),
        "seed": (int, 0),
    },
    "figure": {
        "id": (str, "gdof-curve"),
        "seed": (int, 0),
    },
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_config(args, _DEFAULTS[args.command])
    handler = {
        "rate": cmd_rate,
        "simulate": cmd_simulate,
        "gdof": cmd_gdof,
        "figure": cmd_figure,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
