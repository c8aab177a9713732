"""Command-line harness for reproducible batch runs.

Every run writes a CSV data file and a JSON metadata file (full parameter
echo, seed, tool version, truncation settings) next to the ``--out`` base
path, so any output can be regenerated from its own metadata.  Data
sections contain no timestamps: identical configurations produce
byte-identical CSV files.

Commands and their CSV columns:

  generate     n, re, im                  (also writes <out>.seq, "re im" lines)
  diagnose     quantity, value, classification, rule
  norm         r_k, partial, cumulative
  lemma        r_k, partial, cumulative
  region       alpha, p, label            (grid mode adds boundary-curve columns)
  verify       kind, name, status, detail
  basis-check  i, j, re, im, identity_deviation

Sequence descriptors for --seq:

  geometric:c=0.5,r=0.5,N=20[,phases=spread]
  power:gamma=2,N=50[,phases=spread]
  file:relative/or/absolute/path         ("re im" per line)

``--stolz`` rearranges the generated sequence into the Stolz domain given
by --stolz-eta / --stolz-vertex-angle.  The environment variable
BLASCHKE_LAB_THREADS caps internal parallelism.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .blaschke import TruncatedBlaschke, product_deriv
from .geometry import StolzDomain
from .modelspace import ModelFunction, gram_matrix, h2_inner, kernel_eval, synth
from .quadrature import (
    ahern_integral,
    area_norm,
    classify_growth,
    lemma_integral,
    lemma_regime,
)
from .sequences import (
    ZeroSequence,
    beta_sum,
    blaschke_sum,
    gen_geometric,
    gen_power,
    gen_stolz,
    load_sequence,
    save_sequence,
    separation_constant,
    uniform_separation_constant,
)
from .theorems import (
    VerifyConfig,
    boundary_curves,
    region_classify,
    theorem_ids,
    verify,
)

SCHEMA_VERSION = 1

__all__ = ["RunConfig", "main", "run"]


@dataclass(frozen=True)
class RunConfig:
    """One batch run: a command plus its validated parameter map."""

    command: str
    parameters: Dict[str, object] = field(default_factory=dict)


def _parse_kv(spec: str) -> Dict[str, str]:
    out = {}
    for item in spec.split(","):
        if not item:
            continue
        if "=" not in item:
            raise ValueError(f"malformed descriptor component {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def parse_sequence(descriptor: str, n_override: Optional[int] = None) -> ZeroSequence:
    """Build a ZeroSequence from a descriptor string."""
    kind, _, rest = descriptor.partition(":")
    if kind == "file":
        if not rest:
            raise ValueError("file: descriptor needs a path")
        return load_sequence(rest)
    kv = _parse_kv(rest)
    phases = kv.pop("phases", None)
    n = n_override if n_override is not None else int(kv.pop("N", "0") or 0)
    if n < 1:
        raise ValueError("sequence descriptor needs N >= 1 (or pass --N)")
    if kind == "geometric":
        return gen_geometric(float(kv.pop("c")), float(kv.pop("r")), n, phases)
    if kind == "power":
        return gen_power(float(kv.pop("gamma")), n, phases)
    raise ValueError(f"unknown sequence kind {kind!r}")


def _parse_levels(spec: str) -> Tuple[int, int]:
    lo, sep, hi = spec.partition("..")
    if not sep:
        raise ValueError("--rmax-levels expects the form k1..k2, e.g. 4..10")
    k1, k2 = int(lo), int(hi)
    if not 1 <= k1 <= k2:
        raise ValueError(f"bad level range {spec!r}")
    return k1, k2


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_meta(path: Path, config: RunConfig, summary: Dict[str, object]) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "tool": "blaschke-lab",
        "tool_version": __version__,
        "command": config.command,
        "parameters": config.parameters,
        "summary": summary,
    }
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", "utf-8")


def _out_base(params: Dict[str, object], command: str) -> Path:
    out = params.get("out")
    base = Path(out) if out else Path(f"blaschke_{command}")
    if base.suffix == ".csv":
        base = base.with_suffix("")
    return base


def _seq_from_params(params: Dict[str, object]) -> ZeroSequence:
    descriptor = params.get("seq")
    if not descriptor:
        raise ValueError("this command needs --seq")
    seq = parse_sequence(str(descriptor), params.get("N"))
    if params.get("stolz"):
        dom = StolzDomain(
            complex(np.exp(1j * float(params.get("stolz_vertex_angle", 0.0)))),
            float(params.get("stolz_eta", 2.0)),
        )
        seq = gen_stolz(dom, seq)
    return seq


def _emit(config: RunConfig, header, rows, summary, stdout_lines) -> None:
    base = _out_base(config.parameters, config.command)
    base.parent.mkdir(parents=True, exist_ok=True)
    _write_csv(base.with_suffix(".csv"), header, rows)
    _write_meta(base.with_suffix(".json"), config, summary)
    if config.parameters.get("format") == "json":
        print(json.dumps(summary, sort_keys=True))
    else:
        for line in stdout_lines:
            print(line)


def _quadrature_rows(result) -> List[Tuple[float, float, float]]:
    return result.csv_rows()


def _growth_summary(verdict) -> Dict[str, object]:
    return {
        "classification": verdict.classification,
        "fitted_exponent": None
        if math.isnan(verdict.fitted_exponent)
        else verdict.fitted_exponent,
        "log_type": verdict.log_type,
    }


def _cmd_generate(config: RunConfig) -> int:
    params = config.parameters
    seq = _seq_from_params(params)
    base = _out_base(params, config.command)
    base.parent.mkdir(parents=True, exist_ok=True)
    save_sequence(seq, base.with_suffix(".seq"))
    rows = [(n + 1, z.real, z.imag) for n, z in enumerate(seq.points)]
    summary = {
        "count": seq.count,
        "law": seq.law.describe(),
        "sequence_file": str(base.with_suffix(".seq")),
    }
    _emit(config, ["n", "re", "im"], rows, summary,
          [f"wrote {seq.count} points to {base.with_suffix('.seq')}"])
    return 0


def _cmd_diagnose(config: RunConfig) -> int:
    params = config.parameters
    seq = _seq_from_params(params)
    rows: List[Tuple] = []
    bs = blaschke_sum(seq)
    rows.append(("blaschke_sum", bs.partial_sum, bs.classification, bs.analytic_rule or ""))
    beta = params.get("beta")
    if beta is not None:
        bv = beta_sum(seq, float(beta))
        rows.append((f"beta_sum[{beta}]", bv.partial_sum, bv.classification, bv.analytic_rule or ""))
    if seq.count >= 2:
        rows.append(("separation_constant", separation_constant(seq), "", ""))
    rows.append(("uniform_separation_constant", uniform_separation_constant(seq), "", ""))
    summary = {r[0]: {"value": r[1], "classification": r[2]} for r in rows}
    _emit(config, ["quantity", "value", "classification", "rule"], rows, summary,
          [f"{r[0]} = {_fmt(r[1])} {r[2]}".rstrip() for r in rows])
    return 0


def _cmd_norm(config: RunConfig) -> int:
    params = config.parameters
    seq = _seq_from_params(params)
    p = float(params["p"])
    alpha = float(params["alpha"])
    k1, k2 = params.get("rmax_levels", (4, 10))
    B = TruncatedBlaschke(seq)
    integrand = str(params.get("integrand", "bprime"))
    if integrand == "ahern":
        result = ahern_integral(B, p, alpha, 1.0 - 0.5**k2)
    elif integrand == "bprime":
        floor = float(np.min(1.0 - seq.moduli)) / 4.0
        result = area_norm(
            lambda z: product_deriv(B, z), p, alpha, 1.0 - 0.5**k2,
            angular_scale_floor=floor,
        )
    else:
        raise ValueError(f"unknown integrand {integrand!r}")
    growth = classify_growth(result.growth_samples(k1))
    summary = {
        "integrand": integrand,
        "value": result.value,
        "abs_error_estimate": result.abs_error_estimate,
        "growth": _growth_summary(growth),
    }
    _emit(config, ["r_k", "partial", "cumulative"], _quadrature_rows(result), summary,
          [f"value = {result.value!r} (+/- {result.abs_error_estimate:.3g})",
           f"growth: {growth.classification}"])
    return 0


def _cmd_lemma(config: RunConfig) -> int:
    params = config.parameters
    a = float(params["a"])
    p = float(params["p"])
    alpha = float(params["alpha"])
    k1, k2 = params.get("rmax_levels", (4, 10))
    result = lemma_integral(a, alpha, p, 1.0 - 0.5**k2)
    regime = lemma_regime(a, alpha, p)
    growth = classify_growth(result.growth_samples(k1))
    summary = {
        "value": result.value,
        "abs_error_estimate": result.abs_error_estimate,
        "regime": regime.regime,
        "comparison_value": regime.comparison_value,
        "growth": _growth_summary(growth),
    }
    _emit(config, ["r_k", "partial", "cumulative"], _quadrature_rows(result), summary,
          [f"value = {result.value!r} (+/- {result.abs_error_estimate:.3g})",
           f"regime: {regime.regime} (comparison value {regime.comparison_value:.6g})"])
    return 0


def _region_grid_rows(alpha_range, p_range, step) -> List[Tuple]:
    a_lo, a_hi = alpha_range
    p_lo, p_hi = p_range
    if a_hi < a_lo or p_hi < p_lo or step <= 0.0:
        raise ValueError("empty region grid range")
    curves = list(boundary_curves(0.0))
    rows = []
    n_a = int(math.floor((a_hi - a_lo) / step + 1e-9)) + 1
    n_p = int(math.floor((p_hi - p_lo) / step + 1e-9)) + 1
    for i in range(n_a):
        alpha = a_lo + i * step
        cb = boundary_curves(alpha)
        for j in range(n_p):
            p = p_lo + j * step
            if alpha <= -1.0 or p <= 0.0:
                continue
            verdict = region_classify(alpha, p)
            rows.append((alpha, p, verdict.label) + tuple(cb[c] for c in curves))
    if not rows:
        raise ValueError("empty region grid range")
    return rows


def _cmd_region(config: RunConfig) -> int:
    params = config.parameters
    if params.get("alpha_range") or params.get("p_range"):
        if not (params.get("alpha_range") and params.get("p_range") and params.get("step")):
            raise ValueError("grid mode needs --alpha-range, --p-range, and --step")
        rows = _region_grid_rows(params["alpha_range"], params["p_range"], float(params["step"]))
        header = ["alpha", "p", "label"] + list(boundary_curves(0.0))
        summary = {"cells": len(rows)}
        _emit(config, header, rows, summary, [f"wrote {len(rows)} grid cells"])
        return 0
    alpha = float(params["alpha"])
    p = float(params["p"])
    verdict = region_classify(alpha, p)
    rows = [(alpha, p, verdict.label)]
    summary = {
        "label": verdict.label,
        "applicable": [
            {"theorem": tid, "beta": b} for tid, b in verdict.applicable
        ],
    }
    _emit(config, ["alpha", "p", "label"], rows, summary, [verdict.label])
    return 0


def _cmd_verify(config: RunConfig) -> int:
    params = config.parameters
    seq = _seq_from_params(params)
    tid = str(params["theorem"])
    if tid not in theorem_ids():
        raise ValueError(f"unknown theorem id {tid!r} (use one of {', '.join(theorem_ids())})")
    alpha = float(params["alpha"])
    p = float(params["p"])
    k1, k2 = params.get("rmax_levels", (4, 10))
    cfg = VerifyConfig(
        seed=int(params.get("seed") or VerifyConfig.seed),
        n_samples=int(params.get("samples") or VerifyConfig.n_samples),
        n_coefficients=int(params.get("coeffs") or VerifyConfig.n_coefficients),
        k_min=k1,
        k_max=k2,
        stolz_vertex=complex(np.exp(1j * float(params.get("stolz_vertex_angle", 0.0)))),
        stolz_aperture=float(params.get("stolz_eta", 2.0)),
    )
    report = verify(tid, seq, alpha, p, cfg)
    rows: List[Tuple] = [
        ("hypothesis", c.name, "pass" if c.passed else "fail", c.evidence)
        for c in report.hypothesis_checks
    ]
    if report.conclusion is not None:
        if hasattr(report.conclusion, "classification"):
            detail = getattr(report.conclusion, "analytic_rule", None) or ""
            if hasattr(report.conclusion, "fitted_exponent"):
                detail = f"fitted exponent {report.conclusion.fitted_exponent:.6g}"
            rows.append(
                ("conclusion", "membership" if hasattr(report.conclusion, "window")
                 else "summability", report.conclusion.classification, detail)
            )
    rows.append(("verdict", "consistency", report.consistency, report.caveat))
    summary = {
        "theorem": tid,
        "alpha": alpha,
        "p": p,
        "seed": report.seed,
        "consistency": report.consistency,
        "hypotheses": [
            {"name": c.name, "passed": c.passed, "evidence": c.evidence}
            for c in report.hypothesis_checks
        ],
        "caveat": report.caveat,
    }
    lines = [f"{tid} at (alpha={alpha}, p={p}): {report.consistency}"]
    width = max(len(r[1]) for r in rows)
    lines += [f"  {r[1]:<{width}}  {r[2]:<6}  {r[3]}" for r in rows]
    _emit(config, ["kind", "name", "status", "detail"], rows, summary, lines)
    return 0


def _cmd_basis_check(config: RunConfig) -> int:
    params = config.parameters
    seq = _seq_from_params(params)
    m = int(params.get("m") or min(5, seq.count))
    basis = str(params.get("basis", "g"))
    G = gram_matrix(seq, m, basis=basis)
    eigs = np.linalg.eigvalsh(G)
    rows = []
    for i in range(m):
        for j in range(m):
            target = 1.0 if i == j else 0.0
            rows.append((i + 1, j + 1, G[i, j].real, G[i, j].imag,
                         abs(G[i, j] - target)))
    dev = max(r[4] for r in rows)
    summary = {
        "basis": basis,
        "m": m,
        "max_identity_deviation": dev,
        "gram_eig_min": float(eigs.min()),
        "gram_eig_max": float(eigs.max()),
        "frame_ratio": float(eigs.max() / eigs.min()) if eigs.min() > 0 else None,
    }
    lines = [
        f"gram({m}x{m}, {basis}-basis): max deviation from identity {dev:.3g}",
        f"eigenvalues in [{eigs.min():.6g}, {eigs.max():.6g}]",
    ]
    _emit(config, ["i", "j", "re", "im", "identity_deviation"], rows, summary, lines)
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "diagnose": _cmd_diagnose,
    "norm": _cmd_norm,
    "lemma": _cmd_lemma,
    "region": _cmd_region,
    "verify": _cmd_verify,
    "basis-check": _cmd_basis_check,
}


def run(config: RunConfig) -> int:
    """Execute a run; returns the process exit status."""
    handler = _COMMANDS.get(config.command)
    if handler is None:
        print(f"error: unknown command {config.command!r}", file=sys.stderr)
        return 2
    try:
        return handler(config)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _range_pair(spec: str) -> Tuple[float, float]:
    lo, sep, hi = spec.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("range expects lo:hi")
    return float(lo), float(hi)


def _add_common(sub: argparse.ArgumentParser, *, seq: bool = False) -> None:
    sub.add_argument("--out", help="output base path (writes <out>.csv and <out>.json)")
    sub.add_argument("--format", choices=["csv", "json"], default="csv",
                     help="stdout summary format (files are always written)")
    sub.add_argument("--config", help="JSON file whose keys mirror the flags")
    if seq:
        sub.add_argument("--seq", help="sequence descriptor (see module help)")
        sub.add_argument("--N", type=int, help="override the descriptor's N")
        sub.add_argument("--stolz", action="store_true",
                         help="rearrange the sequence into the configured Stolz domain")
        sub.add_argument("--stolz-eta", type=float, default=2.0,
                         help="Stolz aperture eta > 1 (default 2)")
        sub.add_argument("--stolz-vertex-angle", type=float, default=0.0,
                         help="vertex angle in radians (vertex = exp(i angle))")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blaschke-lab",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("generate", help="generate a zero sequence and write it out")
    _add_common(s, seq=True)
    s.add_argument("--seed", type=int, help="recorded in the metadata")

    s = subs.add_parser("diagnose", help="summability and separation diagnostics")
    _add_common(s, seq=True)
    s.add_argument("--beta", type=float, help="also report beta_sum at this exponent")

    s = subs.add_parser("norm", help="weighted area norm of B' or the membership integrand")
    _add_common(s, seq=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--integrand", choices=["bprime", "ahern"], default="bprime")
    s.add_argument("--rmax-levels", default="4..10",
                   help="radii 1-2^-k for k in k1..k2 (default 4..10)")

    s = subs.add_parser("lemma", help="three-regime kernel integral at a point a")
    _add_common(s)
    s.add_argument("--a", type=float, required=True, help="|a| of the pole point")
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--rmax-levels", default="4..10")

    s = subs.add_parser("region", help="classify (alpha, p) or sweep a grid")
    _add_common(s)
    s.add_argument("--alpha", type=float)
    s.add_argument("--p", type=float)
    s.add_argument("--alpha-range", type=_range_pair, help="grid mode: lo:hi")
    s.add_argument("--p-range", type=_range_pair, help="grid mode: lo:hi")
    s.add_argument("--step", type=float, help="grid mode: cell size")

    s = subs.add_parser("verify", help="run a theorem's verification pipeline")
    _add_common(s, seq=True)
    s.add_argument("--theorem", required=True, help=f"one of {', '.join(theorem_ids())}")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--seed", type=int, help="64-bit seed for sampled coefficients")
    s.add_argument("--samples", type=int, help="number of sampled model functions")
    s.add_argument("--coeffs", type=int, help="coefficients per sampled function")
    s.add_argument("--rmax-levels", default="4..10")

    s = subs.add_parser("basis-check", help="Gram matrix and frame diagnostics")
    _add_common(s, seq=True)
    s.add_argument("--m", type=int, help="number of basis elements (default 5)")
    s.add_argument("--basis", choices=["g", "h"], default="g")
    return parser


def _namespace_to_config(ns: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(ns).items() if k != "command" and v is not None}
    config_path = params.pop("config", None)
    if config_path:
        loaded = json.loads(Path(config_path).read_text(encoding="utf-8"))
        if not isinstance(loaded, dict):
            raise ValueError("config file must hold a JSON object")
        for key, value in loaded.items():
            params.setdefault(key.replace("-", "_"), value)
    if "rmax_levels" in params and isinstance(params["rmax_levels"], str):
        params["rmax_levels"] = _parse_levels(params["rmax_levels"])
    return RunConfig(command=ns.command, parameters=params)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        config = _namespace_to_config(ns)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
