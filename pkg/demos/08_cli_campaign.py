"""
Reproducible campaigns from one TOML file
=========================================

Every CLI run hashes its effective configuration into the output
headers, derives per-replication random streams from (seed, rep), and
writes plain CSV/JSON, so a campaign is pinned by the config file and
one integer.  This script drives the installed command in-process:
simulate, validate-cov, and gate, then proves byte-identity of a rerun.
"""

import hashlib
import json
import tempfile
from pathlib import Path

from gfou.cli import main

CONFIG = """
[process]
kind = "gfou"
hurst = 0.7
horizon = 1.0
mesh = 0.0078125
initial = "stationary"

[process.exponent]
kind = "bm_drift"
mu = 1.5
sigma = 1.0

[run]
replications = 4
seed = 7

[validate]
lags = [0.5, 1.0]
"""

root = Path(tempfile.mkdtemp(prefix="gfou_demo_"))
cfg = root / "experiment.toml"
cfg.write_text(CONFIG)

# --- simulate ----------------------------------------------------------------
out_a, out_b = root / "run_a", root / "run_b"
for out in (out_a, out_b):
    code = main(["simulate", "--config", str(cfg), "--out", str(out)])
    print(f"simulate -> {out.name}: exit {code}")

print("\nfiles written:")
for p in sorted(out_a.iterdir()):
    print(f"  {p.name}")

print("\nhead of rep_00000.csv (config hash + seed are embedded):")
for line in (out_a / "rep_00000.csv").read_text().splitlines()[:5]:
    print(f"  {line}")


def tree_digest(folder: Path) -> str:
    blob = b"".join(p.read_bytes() for p in sorted(folder.iterdir()))
    return hashlib.sha256(blob).hexdigest()


same = tree_digest(out_a) == tree_digest(out_b)
print(f"\nreruns byte-identical: {same}")

# --- validate-cov --------------------------------------------------------------
out_v = root / "validate"
code = main(["validate-cov", "--config", str(cfg), "--out", str(out_v)])
summary = json.loads((out_v / "summary.json").read_text())
print(f"\nvalidate-cov: exit {code}")
print(f"  closed vs oracle agree:  {summary['oracle_agreement']}")
print(f"  closed vs series agree:  {summary['series_agreement']} "
      f"(the series is asymptotic; honest disagreement at short lags)")

# --- gate ------------------------------------------------------------------------
bad = root / "bad.toml"
bad.write_text(CONFIG.replace("mu = 1.5", "mu = -0.5"))
print("\ngate on a drifting-down exponent (theta2 < 0):", flush=True)
code = main(["gate", "--config", str(bad)])
print(f"  exit {code} (3 = gate failure)")
