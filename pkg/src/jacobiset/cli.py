"""Command line entry point.

::

    jacobiset generate --preset analytic --res 80 [--noise default --seed 42] --out data/
    jacobiset compute --preset analytic --res 80 --mode all --format csv,svg --out run/
    jacobiset compute --field-f f.jgrid --field-g g.jgrid --validate all --out run/

Exit status is 0 on success, 1 when an enabled validation fails and 2 for
bad arguments or unreadable input. Set ``JACOBI_LOG`` (e.g. ``INFO`` or
``DEBUG``) for progress messages on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import connectivity as conn
from .export import FORMATS, export_segments
from .fields import GridParseError, NoiseSpec, apply_noise, gen_analytic, load_grid, save_grid
from .jacobi import GridMismatchError, check_even_degree, extract_critical_edges, triangle_kappa
from .mesh import triangulate
from .simplicial import betti01, nerve_of_critical_edges

logger = logging.getLogger("jacobiset")

VALIDATIONS = ("even", "betti", "accounting")
PRESETS = ("analytic",)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    field_f: Path | None = None
    field_g: Path | None = None
    preset: str | None = None
    res: int = 80
    noise: tuple[float, float] | None = None
    seed: int = 0
    modes: tuple[str, ...] = conn.MODES
    out: Path = Path(".")
    formats: tuple[str, ...] = ("csv",)
    validate: tuple[str, ...] = VALIDATIONS
    threads: int = 1

    def __post_init__(self):
        if not self.modes:
            raise UsageError("at least one mode is required")


def _setup_logging():
    level = os.environ.get("JACOBI_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING) if not level.isdigit() else int(level),
        format="%(levelname)s %(name)s: %(message)s",
    )


def _parse_list(text, allowed, name, all_value="all"):
    items = [s.strip() for s in text.split(",") if s.strip()]
    if items == [all_value]:
        return tuple(allowed)
    if items == ["none"]:
        return ()
    bad = [s for s in items if s not in allowed]
    if bad:
        raise UsageError(f"unknown {name} {bad}; choose from {', '.join(allowed)}")
    return tuple(s for s in allowed if s in items)


def parse_noise(text):
    """``none``, ``default`` or ``FRACTION,SIGMA`` with SIGMA relative to the value range.

    Returns ``None`` or a ``(fraction, relative_sigma)`` pair.
    """
    if text is None or text == "none":
        return None
    if text == "default":
        return (0.005, 0.01)
    try:
        frac, rel = (float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad --noise value {text!r}") from None
    if not 0 <= frac <= 1 or rel < 0:
        raise UsageError("noise fraction must lie in [0, 1] and sigma must be >= 0")
    return (frac, rel)


def _noise_for(noise, seed, grid, stream):
    frac, rel = noise
    vals = grid.values
    sigma = rel * float(vals.max() - vals.min())
    return NoiseSpec(salt_pepper_fraction=frac, gaussian_sigma=sigma, seed=seed, stream=stream)


def _grid_format(path):
    return "csv-matrix" if Path(path).suffix.lower() == ".csv" else "text-grid"


def load_fields(config):
    """Return the ``(f, g)`` pair described by ``config``, noise applied."""
    if config.field_f or config.field_g:
        if not (config.field_f and config.field_g):
            raise UsageError("--field-f and --field-g must be given together")
        f = load_grid(config.field_f, _grid_format(config.field_f))
        g = load_grid(config.field_g, _grid_format(config.field_g))
    elif config.preset == "analytic":
        if config.res < 2:
            raise UsageError(f"--res must be at least 2, got {config.res}")
        f, g = gen_analytic(config.res)
    else:
        raise UsageError("give --field-f/--field-g or --preset")
    if config.noise is not None:
        f = apply_noise(f, _noise_for(config.noise, config.seed, f, 0))
        g = apply_noise(g, _noise_for(config.noise, config.seed, g, 1))
    return f, g


def cmd_generate(config):
    f, g = load_fields(config)
    config.out.mkdir(parents=True, exist_ok=True)
    save_grid(f, config.out / "f.jgrid")
    save_grid(g, config.out / "g.jgrid")
    logger.info("wrote %s and %s", config.out / "f.jgrid", config.out / "g.jgrid")
    return 0


def cmd_compute(config):
    """Run the whole pipeline and write segment files plus ``stats.json``."""
    f, g = load_fields(config)
    if not f.same_lattice(g):
        raise GridMismatchError(
            f"f is {f.nx}x{f.ny} and g is {g.nx}x{g.ny} (or their placement differs)"
        )
    t = triangulate(f.nx, f.ny, f.origin, f.spacing)

    t0 = time.perf_counter()
    records = extract_critical_edges(f, g, t, threads=config.threads)
    timings = {"points": 1e3 * (time.perf_counter() - t0)}
    logger.info("%d critical edges", len(records))

    validation = {}
    failed = False
    report = check_even_degree(records, t)
    if "even" in config.validate:
        # exact zeros fall outside the lemma's hypothesis; count them so a failure explains itself
        validation["even_degree"] = {
            "passed": report.ok,
            "odd_interior_vertices": report.odd_interior,
            "zero_kappa_triangles": int((triangle_kappa(f, g, t) == 0.0).sum()),
        }
        failed |= not report.ok

    try:
        graphs, gt = conn.build_graphs(records, t)
    except conn.ParityError as exc:
        logger.error("%s", exc)
        validation["parity_error"] = {"vertex": exc.vertex, "degree": exc.degree}
        _write_stats(config, {"critical_edges": len(records), "validation": validation}, timings)
        return 1
    timings.update(gt)

    stats = conn.reduction_stats(records, graphs, check=False)
    if "accounting" in config.validate:
        validation["accounting"] = {
            "passed": stats.consistent,
            "predicted_removed": stats.predicted_removed,
            "measured_removed": stats.measured_removed,
        }
        failed |= not stats.consistent

    modes = {}
    for mode, graph in graphs.items():
        modes[mode] = {"nodes": len(graph.nodes), "segments": graph.n_segments,
                       "zero_length_segments": len(graph.zero_length)}
    if "betti" in config.validate:
        betti = {mode: list(graph.betti()) for mode, graph in graphs.items()}
        betti["nerve"] = list(betti01(nerve_of_critical_edges(records, max_dim=2)))
        for mode, b in betti.items():
            modes.setdefault(mode, {})["betti"] = b
        ok = betti["pl"] == betti["reduced"] == betti["nerve"]
        validation["betti"] = {"passed": ok}
        failed |= not ok

    sources = {}
    for r in records:
        sources[r.kappa_source] = sources.get(r.kappa_source, 0) + 1

    config.out.mkdir(parents=True, exist_ok=True)
    for mode in config.modes:
        for fmt in config.formats:
            export_segments(graphs[mode], config.out / f"segments_{mode}.{fmt}", fmt, t.bounds())

    doc = {
        "grid": {"nx": f.nx, "ny": f.ny, "origin": list(f.origin), "spacing": list(f.spacing)},
        "critical_edges": len(records),
        "kappa_sources": dict(sorted(sources.items())),
        "modes": modes,
        "reduction": stats.as_dict(),
        "validation": validation,
    }
    _write_stats(config, doc, timings)
    if failed:
        logger.error("validation failed: %s", json.dumps(validation, sort_keys=True))
    return 1 if failed else 0


def _write_stats(config, doc, timings):
    doc = dict(doc)
    doc["timings_ms"] = {k: round(v, 4) for k, v in sorted(timings.items())}
    config.out.mkdir(parents=True, exist_ok=True)
    (config.out / "stats.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def build_parser():
    p = argparse.ArgumentParser(prog="jacobiset", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--preset", choices=PRESETS)
        sp.add_argument("--res", type=int, default=80)
        sp.add_argument("--noise", default="none",
                        help="none, default, or FRACTION,SIGMA (sigma relative to value range)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", type=Path, default=Path("."))

    gen = sub.add_parser("generate", help="write f.jgrid and g.jgrid")
    common(gen)

    comp = sub.add_parser("compute", help="extract, connect, validate and export")
    common(comp)
    comp.add_argument("--field-f", type=Path)
    comp.add_argument("--field-g", type=Path)
    comp.add_argument("--mode", default="all", help="pl, nonreduced, reduced, comma list or all")
    comp.add_argument("--format", default="csv", help="comma list of csv, json, svg")
    comp.add_argument("--validate", default="all", help="all, none, or comma list of even,betti,accounting")
    comp.add_argument("--threads", type=int, default=1)
    return p


def config_from_args(args):
    if args.res < 2:
        raise UsageError(f"--res must be at least 2, got {args.res}")
    kw = dict(
        preset=args.preset,
        res=args.res,
        noise=parse_noise(args.noise),
        seed=args.seed,
        out=args.out,
    )
    if args.command == "compute":
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        kw.update(
            field_f=args.field_f,
            field_g=args.field_g,
            modes=_parse_list(args.mode, conn.MODES, "mode"),
            formats=_parse_list(args.format, FORMATS, "format"),
            validate=_parse_list(args.validate, VALIDATIONS, "validation"),
            threads=args.threads,
        )
    elif args.preset is None:
        raise UsageError("generate needs --preset")
    return RunConfig(**kw)


def main(argv=None):
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        if args.command == "generate":
            return cmd_generate(config)
        return cmd_compute(config)
    except (UsageError, GridParseError, GridMismatchError, ValueError, OSError) as exc:
        print(f"jacobiset: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
