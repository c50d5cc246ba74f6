"""Regenerate the checked-in fixture cases and their golden outputs.

Run from the repository root:  python3 scripts/regen_goldens.py
Goldens must only be regenerated on a deliberate pipeline change.
"""

import hashlib
import json
import subprocess
import sys
import tempfile
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

CASES = [("real_clot", 101), ("turbulence", 202), ("clean_lumen", 303)]


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    from clotseg.image_io import write_pgm
    from clotseg.phantom import PhantomSpec, generate
    from clotseg import report as rpt

    render_hashes = {}
    for kind, seed in CASES:
        spec = PhantomSpec.default(kind, seed=seed, noise_sigma=0.02)
        study, lumen_roi, clot_roi, expected = generate(spec)
        stem = f"fixture_{kind}"
        (FIXTURES / f"{stem}.pgm").write_bytes(write_pgm(study.image))
        (FIXTURES / f"{stem}.roi.json").write_text(rpt.dumps({
            "roi": {"lumen": lumen_roi.to_json(), "clot": clot_roi.to_json()},
            "expected": expected,
        }))
        out = subprocess.run(
            [sys.executable, "-m", "clotseg.cli", "classify",
             str(FIXTURES / f"{stem}.pgm"),
             str(FIXTURES / f"{stem}.roi.json"), "--no-timings"],
            capture_output=True, text=True, check=True)
        (FIXTURES / f"{stem}.report.json").write_text(out.stdout)

        with tempfile.TemporaryDirectory() as tmp:
            subprocess.run(
                [sys.executable, "-m", "clotseg.cli", "render",
                 str(FIXTURES / f"{stem}.pgm"),
                 str(FIXTURES / f"{stem}.roi.json"), "--out", tmp],
                check=True)
            for p in sorted(Path(tmp).iterdir()):
                digest = hashlib.sha256(p.read_bytes()).hexdigest()
                render_hashes[f"{stem}/{p.name}"] = digest

    (FIXTURES / "render_hashes.json").write_text(rpt.dumps(render_hashes))
    print(f"wrote fixtures for {len(CASES)} cases to {FIXTURES}")


if __name__ == "__main__":
    main()
