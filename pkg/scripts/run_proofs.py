"""Build proof chains for a genus range and write one JSON file per genus.

usage: python scripts/run_proofs.py [FIRST LAST] [OUTDIR]
"""

import json
import sys
from pathlib import Path

from sixfold.engine import prove

first, last = (int(sys.argv[1]), int(sys.argv[2])) if len(sys.argv) > 2 else (2, 20)
out = Path(sys.argv[3] if len(sys.argv) > 3 else "proofs")
out.mkdir(parents=True, exist_ok=True)
for g in range(first, last + 1):
    chain = prove(g, closure=False)
    (out / f"proof-g{g}.json").write_text(json.dumps(chain.to_json(), indent=2, sort_keys=True))
    s = chain.summary()
    print(f"g={g:2d} steps={s['steps']:3d} deltas={sorted(set(map(tuple, s['deltas'])))} "
          f"rank={s['rank']} ok={s['ok']} {s['elapsed']:.2f}s")
