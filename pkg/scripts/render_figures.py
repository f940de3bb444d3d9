"""Write SVG drawings of every model, plus curve overlays for g = 5."""

import sys
from pathlib import Path

from sixfold.render import render

out = Path(sys.argv[1] if len(sys.argv) > 1 else "figures")
out.mkdir(parents=True, exist_ok=True)
for g in range(2, 21):
    (out / f"model-g{g}.svg").write_text(render(g))
for overlay in ("basic", "lemma3.2", "hull"):
    (out / f"model-g5-{overlay}.svg").write_text(render(5, overlay))
print(f"wrote {len(list(out.glob('*.svg')))} files to {out}")
