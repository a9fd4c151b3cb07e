"""Command-line front end: configured condition checks, transforms, and
identity verification sweeps, emitted as deterministic CSV or JSON reports.

Exit codes carry operational status only: 0 success, 1 verification
tolerance failure, 2 configuration error, 3 unavailable tail.  Boundedness
verdicts are data inside the reports, never exit codes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .conditions import (
    ConditionReport,
    TailSpec,
    check_c9,
    check_c10,
    check_c11,
    check_c12,
    check_c13,
    check_c14,
    check_c15,
    check_c16,
    check_theorem_a,
    l1_lk_bound,
)
from .errors import ConfigError, SummakitError, TailUnavailableError
from .harness import (
    PROBE_DIFFERENCE,
    PROBE_SHIFT,
    build_cnv,
    build_dnr,
    decompose,
    empirical_constant,
    key_identity_check,
    probe_series,
    run_probe,
)
from .matrices import (
    NormalMatrix,
    WeightSequence,
    cesaro_matrix,
    hat_of,
    identity_matrix,
    invert_hat,
    make_normal,
    riesz_matrix,
)
from .series import (
    FactorSequence,
    SeriesSample,
    abs_k_profile,
    delta_transform_via_hat,
    transform_partial_sums,
)

log = logging.getLogger("summakit")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_TAIL = 3

CONDITION_IDS = ("C9", "C10", "C11", "C12", "C13", "C14", "C15", "C16")

VERIFY_TOLERANCES = {
    "probe-consistency": 1e-12,
    "decomposition-residual": 1e-10,
    "key-identity": 1e-11,
}


class ExperimentConfig:
    """Validated experiment description; see README for the JSON schema."""

    def __init__(self, data: dict):
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
        self.raw = data
        self.order = data.get("N")
        if not isinstance(self.order, int) or self.order < 2:
            raise ConfigError(f"N must be an integer >= 2, got {self.order!r}")
        self.k = data.get("k", 1.0)
        if not isinstance(self.k, (int, float)) or not self.k >= 1:
            raise ConfigError(f"k must be a real number >= 1, got {self.k!r}")
        self.k = float(self.k)
        self.matrix_a = data.get("matrix_a", {"kind": "cesaro"})
        self.matrix_b = data.get("matrix_b", {"kind": "cesaro"})
        self.lambda_spec = data.get("lambda", {"kind": "constant", "value": 1.0})
        self.series_spec = data.get("series", {"kind": "alternating", "beta": 1.0})
        for key in ("matrix_a", "matrix_b", "lambda", "series"):
            spec = getattr(self, key if key in ("matrix_a", "matrix_b") else key + "_spec")
            if not isinstance(spec, dict) or "kind" not in spec:
                raise ConfigError(f"{key} must be an object with a 'kind' tag")
        tail = data.get("tail", {})
        if not isinstance(tail, dict):
            raise ConfigError("tail must be an object")
        cutoff = tail.get("cutoff", 16 * self.order)
        if not isinstance(cutoff, int) or cutoff <= self.order:
            raise ConfigError(f"tail.cutoff must be an integer > N, got {cutoff!r}")
        warn = tail.get("warn_threshold", 1e-6)
        if not isinstance(warn, (int, float)) or not 0 < warn < 1:
            raise ConfigError(f"tail.warn_threshold must lie in (0, 1), got {warn!r}")
        self.tail = TailSpec(cutoff=cutoff, warn_threshold=float(warn))
        out = data.get("output", {})
        if not isinstance(out, dict):
            raise ConfigError("output must be an object")
        self.out_format = out.get("format", "csv")
        if self.out_format not in ("csv", "json"):
            raise ConfigError(f"output.format must be 'csv' or 'json', got {self.out_format!r}")
        self.out_path = out.get("path")
        conds = data.get("conditions", list(CONDITION_IDS))
        known = set(CONDITION_IDS) | {"TA"}
        if not isinstance(conds, list) or not conds or any(c not in known for c in conds):
            raise ConfigError(f"conditions must be a nonempty list drawn from {sorted(known)}")
        self.conditions = conds
        self.delta_mode = data.get("delta_mode", "forward")
        if self.delta_mode not in ("forward", "backward"):
            raise ConfigError(f"delta_mode must be 'forward' or 'backward', got {self.delta_mode!r}")


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def _generated_weights(spec: dict, order: int) -> np.ndarray:
    gen = spec.get("generator", "ones")
    if isinstance(gen, str):
        gen = {"name": gen}
    name = gen.get("name")
    n = np.arange(order + 1, dtype=float)
    if name == "ones":
        return np.ones(order + 1)
    if name == "power":
        alpha = float(gen.get("alpha", 0.0))
        return (n + 1.0) ** alpha
    if name == "geometric":
        ratio = float(gen.get("ratio", 1.0))
        if ratio <= 0:
            raise ConfigError(f"geometric weight ratio must be positive, got {ratio!r}")
        return ratio**n
    raise ConfigError(f"unknown weight generator {name!r}")


def weights_for(spec: dict, order: int) -> WeightSequence:
    """Weight sequence a riesz-family matrix spec can supply at this order."""
    kind = spec["kind"]
    if kind == "cesaro":
        return WeightSequence(np.ones(order + 1))
    if kind != "riesz":
        raise ConfigError(f"matrix kind {kind!r} has no weight sequence")
    if "weights" in spec:
        w = spec["weights"]
        if len(w) < order + 1:
            raise TailUnavailableError(f"need {order + 1} explicit weights, have {len(w)}")
        return WeightSequence(np.asarray(w, dtype=float)[: order + 1])
    return WeightSequence(_generated_weights(spec, order))


def matrix_max_order(spec: dict) -> int | None:
    """Largest order this spec can build, or None when unbounded."""
    kind = spec.get("kind")
    if kind == "explicit":
        return len(spec.get("entries", [])) - 1
    if kind == "riesz" and "weights" in spec:
        return len(spec["weights"]) - 1
    return None


def build_matrix(spec: dict, order: int) -> NormalMatrix:
    kind = spec.get("kind")
    if kind == "identity":
        return identity_matrix(order)
    if kind == "cesaro":
        return cesaro_matrix(order)
    if kind == "riesz":
        try:
            return riesz_matrix(weights_for(spec, order))
        except TailUnavailableError as exc:
            # short explicit weights at the base order are a config problem,
            # not a tail problem
            raise ConfigError(str(exc)) from exc
    if kind == "explicit":
        entries = spec.get("entries")
        if not entries:
            raise ConfigError("explicit matrix needs nonempty 'entries'")
        if len(entries) < order + 1:
            raise ConfigError(f"explicit matrix has {len(entries)} rows, need {order + 1}")
        return make_normal([row for row in entries[: order + 1]], order)
    raise ConfigError(f"unknown matrix kind {kind!r}")


def build_lambda(spec: dict, count: int, k: float, diag_a=None, diag_b=None) -> FactorSequence:
    kind = spec.get("kind")
    if kind == "constant":
        return FactorSequence(np.full(count, float(spec.get("value", 1.0))))
    if kind == "power":
        alpha = float(spec.get("alpha", 0.0))
        vals = np.arange(count, dtype=float) ** alpha
        vals[0] = 1.0
        return FactorSequence(vals)
    if kind == "explicit":
        vals = spec.get("values")
        if vals is None or len(vals) < count:
            raise ConfigError(f"lambda.values must supply at least {count} entries")
        return FactorSequence(np.asarray(vals, dtype=float)[:count])
    if kind == "riesz_adapted":
        if diag_a is None or diag_b is None or len(diag_a) < count:
            raise ConfigError(f"lambda.riesz_adapted needs matrix diagonals through index {count - 1}")
        n = np.arange(count, dtype=float)
        vals = np.abs(np.asarray(diag_a[:count], dtype=float) / np.asarray(diag_b[:count], dtype=float))
        vals[1:] *= n[1:] ** (1.0 / k - 1.0)
        return FactorSequence(vals)
    raise ConfigError(f"unknown lambda kind {kind!r}")


def build_series(spec: dict, size: int) -> SeriesSample:
    kind = spec.get("kind")
    if kind == "explicit":
        coeffs = spec.get("coefficients")
        if not coeffs or len(coeffs) < size:
            raise ConfigError(f"series.coefficients must supply at least {size} entries")
        return SeriesSample(np.asarray(coeffs, dtype=float)[:size])
    if kind == "alternating":
        beta = float(spec.get("beta", 1.0))
        n = np.arange(size, dtype=float)
        return SeriesSample((-1.0) ** np.arange(size) / (n + 1.0) ** beta)
    if kind == "probe":
        v = spec.get("v", 0)
        probe_kind = spec.get("probe_kind", PROBE_DIFFERENCE)
        if not isinstance(v, int) or not 0 <= v <= size - 2:
            raise ConfigError(f"series.probe v must be an integer in [0, {size - 2}], got {v!r}")
        if probe_kind not in (PROBE_DIFFERENCE, PROBE_SHIFT):
            raise ConfigError(f"series.probe_kind must be 'difference' or 'shift', got {probe_kind!r}")
        return probe_series(probe_kind, v, size)
    raise ConfigError(f"unknown series kind {kind!r}")


# ---------------------------------------------------------------------------
# report formatting
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_rows(columns: list[str], rows: list[dict], meta: dict, fmt: str, path: str | None) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])
        text = buf.getvalue()
    else:
        payload = {"meta": meta, "rows": [{c: row[c] for c in columns} for row in rows]}
        text = json.dumps(payload, indent=2, allow_nan=True, default=_fmt) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        log.info("wrote %s report with %d rows to %s", fmt, len(rows), path)
    else:
        sys.stdout.write(text)


def _meta(config: ExperimentConfig, command: str, extra: dict | None = None) -> dict:
    meta = {
        "tool": "summakit",
        "version": __version__,
        "command": command,
        "config": config.raw,
    }
    if extra:
        meta.update(extra)
    return meta


def report_rows(rep: ConditionReport) -> list[dict]:
    rows = []
    for i in range(rep.indices.size):
        rows.append(
            {
                "condition_id": rep.condition_id,
                "v_or_n": int(rep.indices[i]),
                "ratio": float(rep.ratios[i]),
                "running_sup": float(rep.running_sup[i]),
                "trend": rep.trend,
                "tail_cutoff": rep.tail_cutoff,
                "tail_warning": rep.tail_warning,
            }
        )
    return rows


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def lambda_for(config: ExperimentConfig, count: int) -> FactorSequence:
    """Build the factor sequence, sourcing diagonals when the spec needs them."""
    diag_a = diag_b = None
    if config.lambda_spec.get("kind") == "riesz_adapted":
        source_order = count - 1
        max_a = matrix_max_order(config.matrix_a)
        max_b = matrix_max_order(config.matrix_b)
        if (max_a is not None and max_a < source_order) or (max_b is not None and max_b < source_order):
            raise ConfigError(f"lambda.riesz_adapted needs both matrices at order {source_order}")
        diag_a = build_matrix(config.matrix_a, source_order).diagonal
        diag_b = build_matrix(config.matrix_b, source_order).diagonal
    return build_lambda(config.lambda_spec, count, config.k, diag_a, diag_b)


CHECK_COLUMNS = ["condition_id", "v_or_n", "ratio", "running_sup", "trend", "tail_cutoff", "tail_warning"]


def cmd_check(config: ExperimentConfig) -> int:
    N = config.order
    k = config.k
    A = build_matrix(config.matrix_a, N)
    B = build_matrix(config.matrix_b, N)
    lam = lambda_for(config, N + 2)

    tail_order_a = matrix_max_order(config.matrix_a)
    tail_order_b = matrix_max_order(config.matrix_b)

    def tail_carrier(spec, own_max):
        order = config.tail.cutoff if own_max is None else min(config.tail.cutoff, own_max)
        return build_matrix(spec, order)

    rows: list[dict] = []
    reports: list[ConditionReport] = []
    B_tail = None
    for cid in config.conditions:
        if cid == "C9":
            reports.append(check_c9(A, B, lam, k))
        elif cid == "C10":
            if B_tail is None:
                B_tail = tail_carrier(config.matrix_b, tail_order_b)
            reports.append(check_c10(A, B_tail, lam, k, config.tail, v_max=N))
        elif cid == "C11":
            if B_tail is None:
                B_tail = tail_carrier(config.matrix_b, tail_order_b)
            reports.append(check_c11(B_tail, lam, k, config.tail, v_max=N))
        elif cid == "C12":
            reports.append(check_c12(A))
        elif cid == "C13":
            reports.append(check_c13(A))
        elif cid == "C14":
            reports.append(check_c14(B))
        elif cid == "C15":
            reports.append(check_c15(A))
        elif cid == "C16":
            reports.append(check_c16(A, B, lam))
        elif cid == "TA":
            p = weights_for(config.matrix_a, N)
            q = weights_for(config.matrix_b, config.tail.cutoff)
            reports.extend(check_theorem_a(p, q, lam, k, config.tail, n_max=N, delta_mode=config.delta_mode))
    for rep in reports:
        rows.extend(report_rows(rep))
    write_rows(CHECK_COLUMNS, rows, _meta(config, "check"), config.out_format, config.out_path)
    return EXIT_OK


TRANSFORM_COLUMNS = ["n", "transform", "delta", "term", "running_total"]


def cmd_transform(config: ExperimentConfig) -> int:
    N = config.order
    A = build_matrix(config.matrix_a, N)
    series = build_series(config.series_spec, N + 1)
    transformed = transform_partial_sums(A, series)
    deltas = delta_transform_via_hat(A, series)
    profile = abs_k_profile(A, series, config.k)
    rows = []
    for n in range(N + 1):
        rows.append(
            {
                "n": n,
                "transform": float(transformed[n]),
                "delta": float(deltas[n]),
                "term": float(profile.terms[n - 1]) if n >= 1 else 0.0,
                "running_total": float(profile.running_total[n - 1]) if n >= 1 else 0.0,
            }
        )
    write_rows(TRANSFORM_COLUMNS, rows, _meta(config, "transform"), config.out_format, config.out_path)
    return EXIT_OK


VERIFY_COLUMNS = ["check", "value", "tolerance", "status"]


def cmd_verify(config: ExperimentConfig, strict_paper: bool = False, seed: int = 0) -> int:
    N = config.order
    k = config.k
    A = build_matrix(config.matrix_a, N)
    B = build_matrix(config.matrix_b, N)
    lam = lambda_for(config, N + 2)
    series = build_series(config.series_spec, N + 1)
    scale = max(1.0, float(np.max(np.abs(series.partial_sums))))

    rows = []
    failed = False

    def record(name, value, tolerance=None, informational=False):
        nonlocal failed
        if informational or tolerance is None:
            status = "info"
        elif value <= tolerance:
            status = "pass"
        else:
            status = "fail"
            failed = True
        rows.append({"check": name, "value": float(value), "tolerance": tolerance, "status": status})
        log.info("%s: value=%.3e status=%s", name, float(value), status)

    # probe closed forms against the generic hat transform, all v, both kinds
    worst_gap = 0.0
    for kind in (PROBE_DIFFERENCE, PROBE_SHIFT):
        for v in range(N):
            probe = run_probe(A, B, lam, v, kind, k, strict_paper=strict_paper)
            generic = delta_transform_via_hat(A, probe_series(kind, v, N + 1))
            worst_gap = max(worst_gap, float(np.max(np.abs(probe.delta_x - generic))))
    record("probe-consistency", worst_gap, VERIFY_TOLERANCES["probe-consistency"] * scale)

    M, _records = empirical_constant(A, B, lam, k, strict_paper=strict_paper)
    record("empirical-bound-constant", M, informational=True)

    dec = decompose(A, B, lam, series)
    record("decomposition-residual", float(dec.residual), VERIFY_TOLERANCES["decomposition-residual"] * scale)
    record("decomposition-v0-retained", 1.0 if dec.v0_retained else 0.0, informational=True)

    hat_b = hat_of(B)
    inv_hat_a = invert_hat(hat_of(A))
    worst_key = 0.0
    for n in range(2, N + 1):
        for v in range(1, n):
            worst_key = max(
                worst_key,
                float(key_identity_check(A, B, lam, n, v, hat_b=hat_b, inv_hat_a=inv_hat_a)),
            )
    record("key-identity", worst_key, VERIFY_TOLERANCES["key-identity"])

    record("cnv-column-bound", l1_lk_bound(build_cnv(A, B, lam, k), k).sup, informational=True)
    record("dnr-column-bound", l1_lk_bound(build_dnr(A, B, lam, k), k).sup, informational=True)
    if strict_paper:
        strict_sup = l1_lk_bound(build_cnv(A, B, lam, k, strict_paper=True), k).sup
        record("cnv-column-bound-strict", strict_sup, informational=True)
        M_plain, _ = empirical_constant(A, B, lam, k, strict_paper=False)
        record("strict-vs-plain-bound-gap", abs(M - M_plain), informational=True)

    rng = np.random.default_rng(seed)
    for sweep in range(3):
        coeffs = rng.uniform(-1.0, 1.0, size=N + 1)
        rand_lam = FactorSequence(rng.uniform(-1.0, 1.0, size=N + 2))
        rand_series = SeriesSample(coeffs)
        sweep_scale = max(1.0, float(np.max(np.abs(rand_series.partial_sums))))
        rand_dec = decompose(A, B, rand_lam, rand_series)
        record(
            f"decomposition-residual-sweep-{sweep}",
            float(rand_dec.residual),
            VERIFY_TOLERANCES["decomposition-residual"] * sweep_scale,
        )

    meta = _meta(config, "verify", {"tolerances": VERIFY_TOLERANCES, "strict_paper": strict_paper, "seed": seed})
    write_rows(VERIFY_COLUMNS, rows, meta, config.out_format, config.out_path)
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="summakit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, descr in (
        ("check", "evaluate the configured factor conditions"),
        ("transform", "emit the matrix transform and k-norm profile of a series"),
        ("verify", "run the identity verification suite"),
    ):
        p = sub.add_parser(name, help=descr)
        p.add_argument("--config", required=True, help="path to the experiment JSON config")
        p.add_argument("--out", help="output file path (defaults to config output.path or stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format override")
        p.add_argument("--tail-cutoff", type=int, help="tail cutoff override")
        p.add_argument("--strict-paper-mode", action="store_true", help="use the literal published displays where they differ")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized verify sweeps")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=os.environ.get("SUMMAKIT_LOG", "WARNING").upper(), format="%(name)s %(levelname)s %(message)s")
    try:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: cannot read {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.tail_cutoff is not None:
            data = dict(data)
            data["tail"] = dict(data.get("tail", {}), cutoff=args.tail_cutoff)
        config = ExperimentConfig(data)
        if args.out:
            config.out_path = args.out
        if args.format:
            config.out_format = args.format
        if args.command == "check":
            return cmd_check(config)
        if args.command == "transform":
            return cmd_transform(config)
        return cmd_verify(config, strict_paper=args.strict_paper_mode, seed=args.seed)
    except TailUnavailableError as exc:
        print(f"tail unavailable: {exc}", file=sys.stderr)
        return EXIT_TAIL
    except (ConfigError, SummakitError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
