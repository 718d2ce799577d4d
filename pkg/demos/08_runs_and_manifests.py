"""
Experiment runs, CSV outputs and manifests
==========================================

Each run writes versioned CSV tables, a summary and a manifest holding the
config, seed and SHA-256 hashes; rerunning the manifest reproduces the bytes.
The same runs are available as ``python -m carleson_primes``.
"""
import json
import tempfile
from pathlib import Path

from carleson_primes.config import parse_config_text
from carleson_primes.experiments import rerun_manifest, run_experiment

cfg = parse_config_text("k_max = 16\nfit_k_max = 60\nfit_j_max = 16\n")
out = Path(tempfile.mkdtemp())
man = run_experiment("covering", cfg, seed=0, out_dir=out / "a")
print(json.dumps(man["outputs"], indent=1))
print((out / "a" / "covering_brackets.csv").read_text().splitlines()[:5])

_, same = rerun_manifest(out / "a" / "manifest.json", out / "b")
print("rerun identical:", same)
