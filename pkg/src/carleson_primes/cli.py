"""Command-line runner: ``python -m carleson_primes --experiment NAME ...``."""
from __future__ import annotations

import argparse
import json
import sys

from .config import ConfigError, RunConfig, load_config
from .experiments import EXPERIMENTS, rerun_manifest, run_experiment
from .io import FormatError


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="python -m carleson_primes", description=__doc__)
    ap.add_argument("--experiment", choices=sorted(EXPERIMENTS), help="experiment to run")
    ap.add_argument("--config", help="flat key = value config file")
    ap.add_argument("--seed", type=int, default=0, help="master seed")
    ap.add_argument("--out", required=True, help="output directory")
    ap.add_argument("--manifest", help="rerun the run recorded in this manifest")
    ap.add_argument("--lambda-file", help="modulation set, one value per line")
    ap.add_argument("--path-file", help="path CSV (lambda, component_1..K) for 'variation'")
    ap.add_argument("--signal-file", help="signal CSV (n, re, im) for 'carleson'")
    ap.add_argument("--r-list", help="comma-separated r values for 'variation'")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.manifest:
            _, same = rerun_manifest(args.manifest, args.out)
            print(json.dumps({"identical": all(same.values()), "files": same}, sort_keys=True))
            return 0 if all(same.values()) else 1
        if not args.experiment:
            ap.error("--experiment is required unless --manifest is given")
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.r_list:
            cfg.r_list = [float(x) for x in args.r_list.split(",") if x.strip()]
        inputs = {}
        for key, val in (("lambda", args.lambda_file), ("path", args.path_file), ("signal", args.signal_file)):
            if val:
                inputs[key] = val
        manifest = run_experiment(args.experiment, cfg, args.seed, args.out, inputs)
    except (ConfigError, FormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(manifest["outputs"], sort_keys=True))
    return 0
