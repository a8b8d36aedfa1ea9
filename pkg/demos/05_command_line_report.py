"""
Full report from the command line
=================================

The same steps as the earlier scripts, driven through the ``gaitsym``
command: write a synthetic record, analyze it, list the report files.
"""

import tempfile
from pathlib import Path

from gaitsym.cli import main

work = Path(tempfile.mkdtemp(prefix="gaitsym-demo-"))
record = work / "walk.csv"

main(["synth", "--noise-std", "0.5", "--seed", "3", "--left-amp-ratio", "0.3", "-o", str(record)])
main(["analyze", str(record), "--out-dir", str(work / "report"), "--json"])

print()
print((work / "report" / "summary.csv").read_text())
for p in sorted((work / "report").iterdir()):
    print(f"{p.name:<22}{p.stat().st_size:>8} bytes")
