"""Command line entry point: tables, verifications, proof chains and figures.

Exit codes: 0 on success, 2 on usage errors, and one code per verify target
(see ``EXIT_CODES``) when that target has a failing check.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .branching import BranchingError, model_row
from .certificates import CertificateError, commtrick, model_for
from .curves import basic_chordal_curves, curve_family
from .engine import ProofError, base_case, closure_reports, g2_case, prove
from .polygon import ModelError
from .render import RenderError, render
from .subsurface import d_convex_hull

G_MIN, G_MAX = 2, 20
ALLOWED_PRIMES = (2, 3, 5)
TARGETS = ("rh", "model", "hull", "commtrick", "g2", "base", "prove", "closure")
EXIT_CODES = {t: 10 + i for i, t in enumerate(TARGETS)}
EXIT_USAGE = 2


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    genera: tuple[int, ...] = tuple(range(G_MIN, G_MAX + 1))
    primes: tuple[int, ...] = (2, 3)
    mem_budget: int = 2 << 30
    out: Path | None = None
    figures: bool = False
    closure: bool = False
    jobs: int = 1

    def __post_init__(self):
        if any(not G_MIN <= g <= G_MAX for g in self.genera):
            raise UsageError(f"genus range must lie in [{G_MIN}, {G_MAX}]")
        if any(p not in ALLOWED_PRIMES for p in self.primes):
            raise UsageError(f"primes must be among {ALLOWED_PRIMES}")
        if self.mem_budget <= 0 or self.jobs <= 0:
            raise UsageError("memory budget and jobs must be positive")


def parse_range(text: str) -> tuple[int, ...]:
    """``"5"``, ``"2..20"`` or ``"3..2"`` (empty)."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return tuple(range(int(a), int(b) + 1))
        return (int(text),)
    except ValueError:
        raise UsageError(f"bad genus range {text!r}") from None


def parse_primes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad prime list {text!r}") from None


def config_from(args: argparse.Namespace, env=os.environ) -> RunConfig:
    """Flags win over ``SIXFOLD_*`` environment variables, which win over defaults."""
    def pick(flag, var):
        return flag if flag is not None else env.get(var)

    kw = {}
    if (g := pick(args.g, "SIXFOLD_G")) is not None:
        kw["genera"] = parse_range(str(g))
    if (p := pick(getattr(args, "p", None), "SIXFOLD_P")) is not None:
        kw["primes"] = parse_primes(str(p))
    if (mb := pick(getattr(args, "mem_budget", None), "SIXFOLD_MEM_BUDGET")) is not None:
        try:
            kw["mem_budget"] = int(mb)
        except ValueError:
            raise UsageError(f"bad memory budget {mb!r}") from None
    if (out := pick(args.out, "SIXFOLD_OUT")) is not None:
        kw["out"] = Path(out)
    if (jobs := pick(getattr(args, "jobs", None), "SIXFOLD_JOBS")) is not None:
        kw["jobs"] = int(jobs)
    kw["figures"] = bool(getattr(args, "figures", False))
    kw["closure"] = bool(getattr(args, "closure", False))
    return RunConfig(**kw)


# -- checks -----------------------------------------------------------------------

def _timed(name: str, fn) -> dict:
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except (ProofError, CertificateError, ModelError, BranchingError) as e:
        ok, detail = False, {"error": str(e)}
    return {"check": name, "pass": bool(ok), "seconds": round(time.perf_counter() - start, 4),
            "detail": detail}


def _check_rh(g):
    row = model_row(g)
    p, q, r = row.vector.as_tuple()
    fp = row.fp3
    ok = (5 * p + 4 * q + 3 * r == 10 + 2 * g
          and (fp == 2 * g + 2 if g == 3 else fp < 2 * g + 2))
    return ok, row.to_json()


def _check_model(g):
    m = model_for(g)
    m.check()
    inv = m.quotient_invariants()
    return inv.genus == g, {"genus": inv.genus, "profile": inv.profile, "edges": m.n_edges}


def _check_hull(g):
    m = model_for(g)
    S = d_convex_hull(m, curve_family(m))
    want = 2 if g % 3 == 2 or (g % 3 == 0 and g > 3) else 0
    return (S.invariants() == (g, 0, True) and S.residual_filled == want), S.to_json()


def _check_commtrick(g):
    if g < 3:
        return True, {"skipped": "no type p configuration below genus 3"}
    certs = [commtrick(c) for c in basic_chordal_curves(model_for(g), "p")]
    return all(c.homology_ok for c in certs), {"curves": len(certs)}


def _check_g2(g):
    case = g2_case()
    return case.ok, {"convention": case.convention, "alpha_order": case.alpha_order,
                     "identities": [i.to_json() for i in case.identities]}


def _check_base(g):
    if g < 3:
        return True, {"skipped": "genus 2 starts from the explicit chain"}
    b = base_case(g)
    return b.ok, {"subsurface": b.subsurface.to_json(), "curves": [c.name for c in b.curves]}


def _check_prove(g):
    chain = prove(g, closure=False)
    return chain.ok, chain.summary()


def _check_closure_factory(cfg: RunConfig):
    def check(g):
        reports = closure_reports(prove(g, closure=False), cfg.primes, cfg.mem_budget)
        ok = all(r.get("is_full", False) for r in reports if r["expect_full"])
        return ok, {"reports": reports}
    return check


CHECKS = {"rh": _check_rh, "model": _check_model, "hull": _check_hull,
          "commtrick": _check_commtrick, "g2": _check_g2, "base": _check_base,
          "prove": _check_prove}


def verify_report(target: str, cfg: RunConfig) -> dict:
    if target not in TARGETS:
        raise UsageError(f"unknown target {target!r}")
    fn = _check_closure_factory(cfg) if target == "closure" else CHECKS[target]
    genera = (2,) if target == "g2" else cfg.genera
    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
        checks = list(pool.map(lambda g: {"g": g, **_timed(f"{target}[g={g}]", lambda: fn(g))},
                               genera))
    return {"target": target, "version": __version__, "pass": all(c["pass"] for c in checks),
            "seconds": round(time.perf_counter() - start, 4), "checks": checks}


# -- commands ---------------------------------------------------------------------

def _emit(obj, cfg: RunConfig, filename: str) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / filename).write_text(text + "\n")
    print(text)


def cmd_table(cfg: RunConfig) -> int:
    rows = []
    for g in cfg.genera:
        ok, row = _check_rh(g)
        rows.append({**row, "verified": ok})
    _emit({"rows": rows}, cfg, "table.json")
    return 0 if all(r["verified"] for r in rows) else EXIT_CODES["rh"]


def cmd_verify(target: str, cfg: RunConfig) -> int:
    report = verify_report(target, cfg)
    for c in report["checks"]:
        print(f"{'PASS' if c['pass'] else 'FAIL'} {c['check']} ({c['seconds']:.3f}s)",
              file=sys.stderr)
    _emit(report, cfg, f"verify-{target}.json")
    return 0 if report["pass"] else EXIT_CODES[target]


def cmd_prove(cfg: RunConfig) -> int:
    rows = []
    for g in cfg.genera:
        chain = prove(g, closure=cfg.closure, primes=cfg.primes, mem_budget=cfg.mem_budget)
        if cfg.out is not None:
            cfg.out.mkdir(parents=True, exist_ok=True)
            (cfg.out / f"proof-g{g}.json").write_text(
                json.dumps(chain.to_json(), indent=2, sort_keys=True) + "\n")
        s = chain.summary()
        rows.append(s)
        print(f"g={g:2d} steps={s['steps']:3d} final={tuple(s['final'])} rank={s['rank']} "
              f"ok={s['ok']} ({s['elapsed']:.2f}s)", file=sys.stderr)
    _emit({"version": __version__, "summary": rows}, cfg, "proof-summary.json")
    return 0 if all(r["ok"] for r in rows) else EXIT_CODES["prove"]


def cmd_render(cfg: RunConfig, curves: str | None) -> int:
    out = cfg.out or Path(".")
    out.mkdir(parents=True, exist_ok=True)
    for g in cfg.genera:
        suffix = f"-{curves}" if curves else ""
        path = out / f"model-g{g}{suffix}.svg"
        path.write_text(render(g, curves))
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sixfold", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, primes=False):
        p.add_argument("--g", help="genus or range A..B (env SIXFOLD_G)")
        p.add_argument("--out", help="output directory (env SIXFOLD_OUT)")
        if primes:
            p.add_argument("--p", help="comma separated primes (env SIXFOLD_P)")
            p.add_argument("--mem-budget", type=int, help="bytes (env SIXFOLD_MEM_BUDGET)")
            p.add_argument("--jobs", type=int, help="worker threads (env SIXFOLD_JOBS)")

    common(sub.add_parser("table", help="branching data per genus"))
    v = sub.add_parser("verify", help="run one family of checks")
    v.add_argument("target", choices=TARGETS)
    common(v, primes=True)
    pv = sub.add_parser("prove", help="build proof chains")
    pv.add_argument("--closure", action="store_true", help="also run homology closures")
    common(pv, primes=True)
    r = sub.add_parser("render", help="SVG of the model disk")
    r.add_argument("--curves", help="overlay: basic, family, lemma3.2 or hull")
    common(r)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from(args)
        if args.command == "table":
            return cmd_table(cfg)
        if args.command == "verify":
            return cmd_verify(args.target, cfg)
        if args.command == "prove":
            return cmd_prove(cfg)
        return cmd_render(cfg, args.curves)
    except (UsageError, RenderError) as e:
        print(f"error: {e.args[0] if e.args else e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
