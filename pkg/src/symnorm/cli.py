"""Command-line entry point: ``symnorm <command> [flags]``.

Resolution order for every setting is flag, then ``--config`` file, then
the command's default. Exit status is 0 when every asserted check passes,
1 when some fail (failing descriptors go to stderr), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Sequence

from .combinatorics import DoublyStochastic, birkhoff
from .corpus import DIST_FAMILIES
from .errors import SymnormError
from .harness import (
    DEFAULT_SPECS,
    CampaignResult,
    birkhoff_campaign,
    birkhoff_check,
    comb_campaign,
    geiss_campaign,
    growth_campaign,
    herz_campaign,
    integrals_campaign,
    ks_campaign,
    main_campaign,
    prop21_campaign,
    tails_campaign,
)
from .harness.reports import render_csv, render_dat, render_markdown, render_summary, write_text
from .norms import NormSpec

COMMANDS = (
    "verify-main",
    "verify-geiss",
    "verify-ks",
    "verify-prop21",
    "verify-comb",
    "herz",
    "tails",
    "integrals",
    "birkhoff",
    "growth",
)

DEFAULT_COUNT = {
    "verify-main": 200,
    "verify-geiss": 200,
    "verify-ks": 100,
    "verify-prop21": 40,
    "verify-comb": 60,
    "herz": 100,
    "tails": 100,
    "integrals": 0,
    "birkhoff": 50,
    "growth": 50,
}
SHORT_P = [1.0, 2.0, 4.0, 8.0]
LONG_P = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
DEFAULT_P = {"verify-comb": LONG_P, "growth": LONG_P}
DEFAULT_N_MAX = {"herz": 10, "tails": 10, "birkhoff": 8}
CONFIG_KEYS = ("seed", "n", "p", "p_list", "norm", "family", "count", "mode", "samples", "out", "threads", "matrix")
# excluded from the embedded config so outputs are byte-identical across thread counts and directories
RUNTIME_KEYS = ("out", "threads")
SEED_LIMIT = 2**64


@dataclass
class CampaignConfig:
    command: str
    seed: int = 0
    n: int | None = None
    p_list: tuple[float, ...] = tuple(SHORT_P)
    norm: Any = None
    family: str = "all"
    count: int = 0
    mode: str = "exact"
    samples: int = 100_000
    out: str = "symnorm_out"
    threads: int = 1
    matrix: str | None = None

    def replay(self) -> dict[str, Any]:
        """The settings that determine the outputs."""
        return {k: v for k, v in asdict(self).items() if k not in RUNTIME_KEYS}


class UsageError(SymnormError):
    pass


def _parse_p_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --p-list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symnorm", description="Numerical checks for symmetric-norm moment inequalities.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="corpus seed (unsigned 64-bit)")
    common.add_argument("--n", type=int, help="pin the dimension (max dimension for matrix sweeps)")
    common.add_argument("--p", type=float, help="single moment order")
    common.add_argument("--p-list", type=_parse_p_list, dest="p_list", help="moment orders, comma separated")
    common.add_argument("--norm", help="norm spec as JSON or a path to a JSON file")
    common.add_argument("--family", help=f"distribution family: {', '.join(DIST_FAMILIES + ('all',))}")
    common.add_argument("--count", type=int, help="corpus size")
    common.add_argument("--mode", choices=("exact", "mc"), help="exact enumeration or Monte Carlo")
    common.add_argument("--samples", type=int, help="Monte Carlo sample count")
    common.add_argument("--out", help="output directory (default $SYMNORM_OUT or ./symnorm_out)")
    common.add_argument("--threads", type=int, help="worker threads")
    common.add_argument("--config", help="JSON config file; flags override its values")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "birkhoff":
            p.add_argument("--matrix", help="decompose this JSON matrix instead of a corpus")
    return parser


def _load_norm(value: Any) -> Any:
    if value is None or isinstance(value, dict):
        return value
    text = str(value)
    if not text.lstrip().startswith("{"):
        path = Path(text)
        if not path.is_file():
            raise UsageError(f"--norm is neither JSON nor an existing file: {text!r}")
        text = path.read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--norm is not valid JSON: {exc}") from exc
    NormSpec.from_json(obj)
    return obj


def resolve_config(args: argparse.Namespace, env: dict[str, str] | None = None) -> CampaignConfig:
    env = os.environ if env is None else env
    file_values: dict[str, Any] = {}
    if args.config:
        try:
            file_values = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config!r}: {exc}") from exc
        if not isinstance(file_values, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(file_values) - set(CONFIG_KEYS) - {"command"}
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
    merged: dict[str, Any] = {k: v for k, v in file_values.items() if k != "command"}
    if args.p is not None and args.p_list is not None:
        raise UsageError("give either --p or --p-list, not both")
    if args.p is not None:
        merged.pop("p_list", None)
    for key in CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    p_single = merged.pop("p", None)
    if p_single is not None and "p_list" not in merged:
        merged["p_list"] = [p_single]
    cmd = args.command
    cfg = CampaignConfig(
        command=cmd,
        seed=int(merged.get("seed", 0)),
        n=None if merged.get("n") is None else int(merged["n"]),
        p_list=tuple(float(v) for v in merged.get("p_list", DEFAULT_P.get(cmd, SHORT_P))),
        norm=_load_norm(merged.get("norm")),
        family=str(merged.get("family", "all")),
        count=int(merged.get("count", DEFAULT_COUNT[cmd])),
        mode=str(merged.get("mode", "exact")),
        samples=int(merged.get("samples", 100_000)),
        out=str(merged.get("out", env.get("SYMNORM_OUT", "symnorm_out"))),
        threads=int(merged.get("threads", 1)),
        matrix=merged.get("matrix"),
    )
    _validate(cfg)
    return cfg


def _validate(cfg: CampaignConfig) -> None:
    if not 0 <= cfg.seed < SEED_LIMIT:
        raise UsageError(f"--seed must be an unsigned 64-bit integer, got {cfg.seed}")
    if cfg.n is not None and cfg.n < 1:
        raise UsageError(f"--n must be >= 1, got {cfg.n}")
    if not cfg.p_list or any(not p >= 1 for p in cfg.p_list):
        raise UsageError(f"moment orders must be >= 1, got {list(cfg.p_list)}")
    if cfg.count < 0 or cfg.samples < 1 or cfg.threads < 1:
        raise UsageError("--count must be >= 0; --samples and --threads must be >= 1")
    if cfg.mode not in ("exact", "mc"):
        raise UsageError(f"--mode must be exact or mc, got {cfg.mode!r}")
    if cfg.family not in DIST_FAMILIES + ("all",):
        raise UsageError(f"unknown --family {cfg.family!r}")
    if cfg.command != "integrals" and cfg.count == 0 and not cfg.matrix:
        raise UsageError("--count must be positive")


def _specs(cfg: CampaignConfig) -> tuple[NormSpec, ...]:
    return (NormSpec.from_json(cfg.norm),) if cfg.norm is not None else DEFAULT_SPECS


def run_campaign(cfg: CampaignConfig) -> CampaignResult:
    cmd = cfg.command
    common = dict(seed=cfg.seed, count=cfg.count, threads=cfg.threads)
    if cmd == "verify-main":
        return main_campaign(**common, n=cfg.n, p_list=cfg.p_list, specs=_specs(cfg), family=cfg.family, mode=cfg.mode, samples=cfg.samples)
    if cmd == "verify-geiss":
        return geiss_campaign(**common, n=cfg.n, p_list=cfg.p_list, family=cfg.family)
    if cmd == "verify-ks":
        return ks_campaign(**common, n=cfg.n)
    if cmd == "verify-prop21":
        return prop21_campaign(**common, n=cfg.n, p_list=cfg.p_list, specs=_specs(cfg), mode=cfg.mode, samples=cfg.samples)
    if cmd == "verify-comb":
        return comb_campaign(**common, n=cfg.n, p_list=cfg.p_list, mode=cfg.mode, samples=cfg.samples)
    if cmd == "herz":
        return herz_campaign(**common, n_max=cfg.n or DEFAULT_N_MAX[cmd])
    if cmd == "tails":
        return tails_campaign(**common, n_max=cfg.n or DEFAULT_N_MAX[cmd])
    if cmd == "integrals":
        return integrals_campaign()
    if cmd == "birkhoff":
        return birkhoff_campaign(**common, n_max=cfg.n or DEFAULT_N_MAX[cmd])
    if cmd == "growth":
        spec = _specs(cfg)[0] if cfg.norm is not None else NormSpec.lp(1.0)
        return growth_campaign(**common, n=cfg.n, p_list=cfg.p_list, spec=spec, family=cfg.family, mode=cfg.mode, samples=cfg.samples)
    raise UsageError(f"unknown command {cmd!r}")


def _matrix_run(cfg: CampaignConfig, out: Path) -> CampaignResult:
    try:
        entries = json.loads(Path(cfg.matrix).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read matrix {cfg.matrix!r}: {exc}") from exc
    mu = DoublyStochastic.from_json(entries)
    dec = birkhoff(mu)
    config = cfg.replay()
    write_text(out / "birkhoff_terms.json", json.dumps({"config": config, **dec.to_json()}, indent=2) + "\n")
    report = birkhoff_check(mu, descriptor={"matrix": Path(cfg.matrix).name, "n": mu.n})
    return CampaignResult("birkhoff", [report])


def write_outputs(cfg: CampaignConfig, result: CampaignResult, out: Path) -> list[Path]:
    config = cfg.replay()
    stem = cfg.command
    files = {
        out / f"{stem}.csv": render_csv(result.reports, config),
        out / f"{stem}.json": render_summary(config, result.reports, result.constants, result.checks, result.tables, result.notes),
        out / f"{stem}.md": render_markdown(stem, config, result.reports, result.constants, result.checks, result.tables, result.notes),
    }
    if stem == "growth":
        files[out / "growth.dat"] = render_dat(config, _dat_rows(result))
    for path, text in files.items():
        write_text(path, text)
    return list(files)


def _dat_rows(result: CampaignResult) -> list[dict[str, Any]]:
    growth = next(rows for name, rows in result.tables.items() if name.startswith("growth "))
    witness = {row["p"]: row["normalized"] for row in result.tables.get("binomial witness", [])}
    return [
        {"p": row["p"], "R_max": row["R_max"], "R_normalized": row["R_normalized"], "witness_normalized": witness.get(row["p"], float("nan"))}
        for row in growth
    ]


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        out = Path(cfg.out)
        if cfg.command == "birkhoff" and cfg.matrix:
            result = _matrix_run(cfg, out)
        else:
            result = run_campaign(cfg)
        paths = write_outputs(cfg, result, out)
    except SymnormError as exc:
        print(f"symnorm: error: {exc}", file=sys.stderr)
        return 2
    failures = result.failures
    print(f"{cfg.command}: {len(result.reports)} instances, {len(failures)} failing; wrote {', '.join(str(p) for p in paths)}")
    for note in result.notes:
        print(f"note: {note}")
    if failures:
        for line in failures:
            print(f"FAIL {line}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
