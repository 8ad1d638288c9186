"""The whole pipeline through the command-line interface.

Generates a synthetic corpus with planted ground truth, validates it,
deduplicates, builds the collaboration network, computes every metric
family, fits the heavy tails, and assembles the report with a hashed
manifest.  Rerunning this script reproduces every file byte for byte.
"""

import json
from pathlib import Path

from collabnet.cli import main

OUT = Path(__file__).parent / "demo_output"

stages = ("synth", "ingest", "dedup", "build", "metrics", "fit", "report")
flags = ["-o", str(OUT), "--n-scientists", "1500", "--seed", "99"]

for stage in stages:
    code = main([stage, *flags])
    assert code == 0, f"{stage} exited with {code}"

print("\nreport directory:")
for path in sorted((OUT / "report").iterdir()):
    print(f"  {path.name}")

manifest = json.loads((OUT / "report" / "manifest.json").read_text())
print(f"\nmanifest hashes {len(manifest['files'])} files;")
print(f"giant component fraction: {manifest['counts']['giant_component_fraction']}")

fits = json.loads((OUT / "fits" / "fit_degree_female.json").read_text())
print(f"fitted degree model (women): alpha={fits['params']['alpha']}, "
      f"beta={fits['params']['beta']} (planted alpha 1.53)")

print("\ntable 2 analog (mean m-ratio by field and gender):")
print((OUT / "report" / "table2_m_ratio.csv").read_text())
