"""Command-line front end: analytic sweeps, Monte Carlo runs, decompositions.

Exit codes: 0 success, 1 usage/configuration error, 2 QBER abort,
3 I/O error.
"""
from __future__ import annotations

import argparse
import math
import sys

from .encoding import EncodingChoice
from .errors import ConfigurationError
from .protocol import RunConfig, run_protocol
from .rates import RateParams, rate_report, rate_sweep
from .states import (
    BasisKind,
    HyperBellOutcome,
    RECT_LETTERS_3,
    default_dof_labels,
    hyper_bell_amplitudes,
    tensor_joint,
)
from .encoding import ideal_state

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ABORT = 2
EXIT_IO = 3

_DOF_SUFFIX_3 = ("p", "f", "s")

_DEFAULTS = {
    "seed": 0,
    "rounds": 1_000_000,
    "dofs": 3,
    "distance": 0.0,
    "atten": 0.2,
    "f_ec": 1.0,
    "threshold": 0.11,
    "d_start": 0.0,
    "d_end": 300.0,
    "d_step": 10.0,
}

_NEGATIVE_RATE_WARNING = (
    "warning: the QBER at these parameters drives the raw key rate negative; "
    "negative per-DOF rates are clamped to 0 in the output")


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    """Full-precision text for CSV cells; 'NA' for undefined values."""
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _parse_scalar(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise ConfigurationError(f"cannot parse number {text!r}")


def _parse_kv(item: str, what: str) -> tuple[str, float]:
    if "=" not in item:
        raise ConfigurationError(
            f"{what} expects K=V with K a DOF index or 'all', got {item!r}")
    key, _, value = item.partition("=")
    key = key.strip()
    try:
        return key, float(value)
    except ValueError:
        raise ConfigurationError(f"cannot parse {what} value {value!r}")


_SCALAR_KEYS = {
    "seed": "seed", "n_rounds": "rounds", "rounds": "rounds",
    "n_dofs": "dofs", "dofs": "dofs",
    "distance_km": "distance", "distance": "distance",
    "attenuation_db_per_km": "atten", "atten": "atten",
    "f_ec": "f_ec", "qber_abort_threshold": "threshold",
    "threshold": "threshold",
    "d_start": "d_start", "d_end": "d_end", "d_step": "d_step",
}


def _apply_config_file(settings: dict, path: str) -> None:
    """Flat key=value file with '#' comments; DOF-indexed keys beta.K, theta.K.

    beta.K is the amplitude fidelity (not its square) and theta.K is the
    rotation angle in radians.
    """
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigurationError(
                    f"{path}:{lineno}: expected key=value, got {text!r}")
            key, _, value = text.partition("=")
            key = key.strip()
            value = value.strip()
            if key in _SCALAR_KEYS:
                settings[_SCALAR_KEYS[key]] = _parse_scalar(value)
                continue
            base, _, index = key.partition(".")
            if base in ("beta", "theta") and index:
                try:
                    k = int(index)
                except ValueError:
                    raise ConfigurationError(
                        f"{path}:{lineno}: bad DOF index in {key!r}")
                settings[base][k] = float(value)
                continue
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")


def _expand_per_dof(entries: list[tuple[str, float]], n_dofs: int,
                    what: str) -> dict[int, float]:
    out: dict[int, float] = {}
    for key, value in entries:
        if key == "all":
            for k in range(n_dofs):
                out[k] = value
        else:
            try:
                k = int(key)
            except ValueError:
                raise ConfigurationError(
                    f"{what}: DOF key must be an index or 'all', got {key!r}")
            if not 0 <= k < n_dofs:
                raise ConfigurationError(
                    f"{what}: DOF index {k} out of range for {n_dofs} DOFs")
            out[k] = value
    return out


def _beta_from_squared(value: float) -> float:
    if not 0.0 < value <= 1.0:
        raise ConfigurationError(f"beta^2 must lie in (0, 1], got {value}")
    return math.sqrt(value)


def _theta_from_sin_squared(value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise ConfigurationError(f"sin^2(theta) must lie in [0, 1], got {value}")
    return math.asin(math.sqrt(value))


def _resolve_settings(args) -> dict:
    """Defaults, then config file, then the fig2 preset, then explicit flags."""
    settings = dict(_DEFAULTS)
    settings["beta"] = {}
    settings["theta"] = {}
    if args.config:
        _apply_config_file(settings, args.config)
    if getattr(args, "fig2", False):
        n_probe = args.dofs if args.dofs is not None else settings["dofs"]
        for k in range(int(n_probe)):
            settings["beta"][k] = _beta_from_squared(0.85)
            settings["theta"][k] = _theta_from_sin_squared(0.015)
    for flag in ("seed", "rounds", "dofs", "distance", "atten", "f_ec",
                 "threshold", "d_start", "d_end", "d_step"):
        value = getattr(args, flag, None)
        if value is not None:
            settings[flag] = value
    n_dofs = int(settings["dofs"])
    if n_dofs < 1:
        raise ConfigurationError(f"need at least one DOF, got {n_dofs}")
    beta2_entries = [_parse_kv(item, "--beta2") for item in (args.beta2 or [])]
    for k, value in _expand_per_dof(beta2_entries, n_dofs, "--beta2").items():
        settings["beta"][k] = _beta_from_squared(value)
    sin2_entries = [_parse_kv(item, "--sin2theta") for item in (args.sin2theta or [])]
    for k, value in _expand_per_dof(sin2_entries, n_dofs, "--sin2theta").items():
        settings["theta"][k] = _theta_from_sin_squared(value)
    for k in settings["beta"]:
        if not 0 <= k < n_dofs:
            raise ConfigurationError(
                f"beta given for DOF {k}, out of range for {n_dofs} DOFs")
    for k in settings["theta"]:
        if not 0 <= k < n_dofs:
            raise ConfigurationError(
                f"theta given for DOF {k}, out of range for {n_dofs} DOFs")
    settings["beta_tuple"] = tuple(
        settings["beta"].get(k, 1.0) for k in range(n_dofs))
    settings["theta_tuple"] = tuple(
        settings["theta"].get(k, 0.0) for k in range(n_dofs))
    settings["dofs"] = n_dofs
    return settings


def _rate_params(settings: dict) -> RateParams:
    return RateParams(
        beta=settings["beta_tuple"],
        theta=settings["theta_tuple"],
        distance_km=float(settings["distance"]),
        attenuation_db_per_km=float(settings["atten"]),
        f_ec=float(settings["f_ec"]),
    )


def _dof_suffixes(n_dofs: int) -> tuple[str, ...]:
    if n_dofs == 3:
        return _DOF_SUFFIX_3
    return tuple(f"dof{k}" for k in range(n_dofs))


def _write_rows(path: str | None, rows: list[str]) -> None:
    payload = "".join(row + "\n" for row in rows)
    if path is None:
        sys.stdout.write(payload)
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(payload)


def _cmd_analytic_sweep(args) -> int:
    settings = _resolve_settings(args)
    d_start = float(settings["d_start"])
    d_end = float(settings["d_end"])
    d_step = float(settings["d_step"])
    if d_start < 0 or d_end < d_start or d_step <= 0:
        raise ConfigurationError(
            f"invalid distance range: start={d_start} end={d_end} step={d_step}")
    d_values = []
    d = d_start
    while d <= d_end + 1e-9:
        d_values.append(round(d, 12))
        d += d_step
    params = _rate_params(settings)
    reports = rate_sweep(params, d_values)
    suffix = _dof_suffixes(settings["dofs"])
    header = (["d_km", "r0"]
              + [f"e_z_{s}" for s in suffix]
              + [f"r_{s}" for s in suffix]
              + ["r_total", "log10_r_total"])
    rows = [",".join(header)]
    for report in reports:
        cells = [_fmt(report.distance_km), _fmt(report.r0)]
        cells += [_fmt(entry.e_z) for entry in report.per_dof]
        cells += [_fmt(entry.clamped) for entry in report.per_dof]
        cells += [_fmt(report.total_clamped), _fmt(report.log10_total_clamped)]
        rows.append(",".join(cells))
    _write_rows(args.out, rows)
    if any(entry.raw < 0.0 for report in reports for entry in report.per_dof):
        print(_NEGATIVE_RATE_WARNING, file=sys.stderr)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    settings = _resolve_settings(args)
    config = RunConfig.from_values(
        n_rounds=int(settings["rounds"]),
        seed=int(settings["seed"]),
        n_dofs=settings["dofs"],
        beta=settings["beta_tuple"],
        theta=settings["theta_tuple"],
        distance_km=float(settings["distance"]),
        attenuation_db_per_km=float(settings["atten"]),
        f_ec=float(settings["f_ec"]),
        qber_abort_threshold=float(settings["threshold"]),
    )
    stats = run_protocol(config)
    report = rate_report(config.rate)
    labels = default_dof_labels(config.n_dofs)
    header = ("dof,name,rect_pairs,rect_errors,rect_qber,"
              "diag_pairs,diag_errors,diag_qber,key_bits,empirical_rate,"
              "analytic_qber,analytic_rate_raw,analytic_rate_clamped,abort")
    rows = [header]
    for k in range(config.n_dofs):
        entry = report.per_dof[k]
        rows.append(",".join([
            str(k), labels[k].name,
            _fmt(stats.pairs[k][0]), _fmt(stats.errors[k][0]),
            _fmt(stats.qber(k, BasisKind.RECTILINEAR)),
            _fmt(stats.pairs[k][1]), _fmt(stats.errors[k][1]),
            _fmt(stats.qber(k, BasisKind.DIAGONAL)),
            _fmt(stats.key_bits(k)),
            _fmt(stats.empirical_dof_rate(k)),
            _fmt(entry.e_z), _fmt(entry.raw), _fmt(entry.clamped),
            _fmt(stats.abort),
        ]))
    rows.append(",".join([
        "total", "",
        _fmt(sum(stats.pairs[k][0] for k in range(config.n_dofs))),
        _fmt(sum(stats.errors[k][0] for k in range(config.n_dofs))),
        "NA",
        _fmt(sum(stats.pairs[k][1] for k in range(config.n_dofs))),
        _fmt(sum(stats.errors[k][1] for k in range(config.n_dofs))),
        "NA",
        _fmt(sum(stats.key_bits(k) for k in range(config.n_dofs))),
        _fmt(stats.empirical_total_rate),
        "NA", _fmt(report.total_raw), _fmt(report.total_clamped),
        _fmt(stats.abort),
    ]))
    _write_rows(args.out, rows)
    summary_stream = sys.stdout if args.out else sys.stderr
    survived_fraction = stats.rounds_survived / stats.rounds_total
    print(f"rounds_total={stats.rounds_total} "
          f"rounds_survived={stats.rounds_survived} "
          f"survived_fraction={survived_fraction:.6f} "
          f"abort={'true' if stats.abort else 'false'}",
          file=summary_stream)
    if any(entry.raw < 0.0 for entry in report.per_dof):
        print(_NEGATIVE_RATE_WARNING, file=sys.stderr)
    return EXIT_ABORT if stats.abort else EXIT_OK


def _token_to_choice(token: str, dof: int, n_dofs: int) -> tuple[BasisKind, int]:
    token = token.strip()
    if not token:
        raise ConfigurationError("empty DOF token in state text")
    head, tag = token[0], token[1:]
    if head in "+-":
        if tag:
            if n_dofs != 3 or tag.lower() != _DOF_SUFFIX_3[dof]:
                raise ConfigurationError(
                    f"basis tag {tag!r} does not match DOF {dof}")
        return BasisKind.DIAGONAL, (0 if head == "+" else 1)
    if tag:
        raise ConfigurationError(f"cannot parse DOF token {token!r}")
    letter = head.upper()
    if n_dofs == 3 and letter in RECT_LETTERS_3[dof]:
        return BasisKind.RECTILINEAR, RECT_LETTERS_3[dof].index(letter)
    if letter in ("0", "1"):
        return BasisKind.RECTILINEAR, int(letter)
    raise ConfigurationError(
        f"token {token!r} is not valid for DOF {dof} of {n_dofs}")


def parse_state_text(text: str, n_dofs: int) -> EncodingChoice:
    """Parse a per-DOF state description such as 'HLI' or 'V,+f,-s'.

    Comma-separated tokens, or one character per DOF when no comma is
    present.  Rectilinear states use the standard letters (H/V, L/R, I/E
    for three DOFs; 0/1 otherwise); diagonal states use '+' and '-',
    optionally tagged with the DOF suffix (p/f/s).
    """
    text = text.strip()
    tokens = ([t for t in text.split(",")] if "," in text else list(text))
    if len(tokens) != n_dofs:
        raise ConfigurationError(
            f"state text {text!r} describes {len(tokens)} DOFs, expected {n_dofs}")
    return EncodingChoice(tuple(
        _token_to_choice(token, k, n_dofs) for k, token in enumerate(tokens)))


def _cmd_decompose(args) -> int:
    settings = _resolve_settings(args)
    n_dofs = settings["dofs"]
    alice = parse_state_text(args.alice, n_dofs)
    bob = parse_state_text(args.bob, n_dofs)
    joint = tensor_joint(ideal_state(alice), ideal_state(bob))
    amps = hyper_bell_amplitudes(joint)
    print("index  outcome  amplitude  probability")
    for index, amp in enumerate(amps):
        if abs(amp) <= 1e-12:
            continue
        outcome = HyperBellOutcome.from_index(index, n_dofs)
        amp_text = _fmt(amp.real) if abs(amp.imag) < 1e-12 else repr(complex(amp))
        print(f"{index:>5}  {outcome.label:<{6 * n_dofs}}  {amp_text}  "
              f"{_fmt(abs(amp) ** 2)}")
    return EXIT_OK


def _add_common_flags(sub) -> None:
    sub.add_argument("--config", metavar="PATH",
                     help="flat key=value configuration file")
    sub.add_argument("--out", metavar="PATH",
                     help="output CSV path (default: standard output)")
    sub.add_argument("--seed", type=int, metavar="INT")
    sub.add_argument("--rounds", type=int, metavar="INT")
    sub.add_argument("--dofs", type=int, metavar="INT")
    sub.add_argument("--distance", type=float, metavar="KM")
    sub.add_argument("--d-start", dest="d_start", type=float, metavar="KM")
    sub.add_argument("--d-end", dest="d_end", type=float, metavar="KM")
    sub.add_argument("--d-step", dest="d_step", type=float, metavar="KM")
    sub.add_argument("--beta2", action="append", metavar="K=V",
                     help="squared source fidelity per DOF (K index or 'all')")
    sub.add_argument("--sin2theta", action="append", metavar="K=V",
                     help="squared sine of the channel angle per DOF")
    sub.add_argument("--atten", dest="atten", type=float, metavar="DB_PER_KM")
    sub.add_argument("--f-ec", dest="f_ec", type=float, metavar="REAL")
    sub.add_argument("--threshold", type=float, metavar="REAL")
    sub.add_argument("--fig2", action="store_true",
                     help="preset: beta^2 = 0.85 and sin^2(theta) = 0.015 "
                          "in every DOF")


def build_parser() -> _Parser:
    parser = _Parser(prog="hyperqkd",
                     description="MDI-QKD over multiple photonic DOFs: "
                                 "analytic rates and Monte Carlo simulation")
    commands = parser.add_subparsers(dest="command", required=True)
    sweep = commands.add_parser(
        "analytic-sweep", help="key rates over a distance range, as CSV")
    _add_common_flags(sweep)
    simulate = commands.add_parser(
        "simulate", help="Monte Carlo protocol run, as CSV plus a summary")
    _add_common_flags(simulate)
    decompose = commands.add_parser(
        "decompose", help="hyper-Bell decomposition of a preparation pair")
    _add_common_flags(decompose)
    decompose.add_argument("--alice", required=True, metavar="STATE",
                           help="Alice's preparation, e.g. HLI or 'V,+f,-s'")
    decompose.add_argument("--bob", required=True, metavar="STATE",
                           help="Bob's preparation")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "analytic-sweep": _cmd_analytic_sweep,
        "simulate": _cmd_simulate,
        "decompose": _cmd_decompose,
    }
    try:
        return handlers[args.command](args)
    except ConfigurationError as exc:
        print(f"hyperqkd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hyperqkd: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
