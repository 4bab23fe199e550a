"""Command line entry point: ``gsa atlas``, ``gsa markoff`` and ``gsa epi``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_CONSISTENCY = 0, 2, 3, 4

log = logging.getLogger("gsa")


def _read_config(path: str | None) -> dict:
    """Optional JSON config with keys matching the long flag names."""
    if not path:
        return {}
    import json

    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gsa", description="Components of moduli of elliptic "
                                "curves with G-structures, and Markoff orbits mod p.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    a = sub.add_parser("atlas", help="component table for a group")
    a.add_argument("--group", required=True, help="e.g. D:10@aut=natural, SL2:7, perm:FILE")
    a.add_argument("--congruence-cap", type=int, default=None)
    a.add_argument("--max-order", type=int, default=None)
    a.add_argument("--format", choices=("md", "csv", "json"), default=None)
    a.add_argument("--out", default=None)
    a.add_argument("--cache", default=None, help="directory for JSON report cache")
    a.add_argument("--threads", type=int, default=None)
    a.add_argument("--config", default=None, help="JSON file of option defaults")

    m = sub.add_parser("markoff", help="Markoff triples mod p")
    g = m.add_mutually_exclusive_group(required=True)
    g.add_argument("--p", type=int)
    g.add_argument("--p-range", help="A..B, inclusive; emits CSV")
    m.add_argument("--crosscheck", action="store_true")
    m.add_argument("--out", default=None)

    e = sub.add_parser("epi", help="generating pairs up to conjugation")
    e.add_argument("--group", required=True)
    e.add_argument("--list", action="store_true")
    return p


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_atlas(args) -> int:
    from gsa.atlas import (
        AtlasConfig, cache_path, emit, load_report, parse_group_spec, run_atlas, save_report,
    )

    conf = _read_config(args.config)

    def opt(name, default):
        v = getattr(args, name)
        return v if v is not None else conf.get(name, default)

    config = AtlasConfig(congruence_cap=int(opt("congruence_cap", 512)),
                         max_order=int(opt("max_order", 200_000)),
                         threads=int(opt("threads", os.cpu_count() or 1)))
    fmt = opt("format", "md")
    spec = parse_group_spec(args.group)
    report = None
    path = None
    if args.cache:
        os.makedirs(args.cache, exist_ok=True)
        path = cache_path(args.cache, spec.text, config)
        if os.path.exists(path):
            report = load_report(path)
            log.info("loaded %s", path)
    if report is None:
        report = run_atlas(spec, config)
        if path:
            save_report(report, path)
    _write(emit(report, fmt), opt("out", None))
    return EXIT_OK


def _parse_range(s: str) -> range:
    try:
        a, b = s.split("..")
        return range(int(a), int(b) + 1)
    except ValueError as exc:
        raise ValueError(f"expected A..B, got {s!r}") from exc


def _cmd_markoff(args) -> int:
    from gsa.markoff import crosscheck_epi_bijection, markoff_orbits, sweep_csv
    from gsa.permgroup.families import is_prime

    if args.p_range:
        primes = [p for p in _parse_range(args.p_range) if p > 2 and is_prime(p)]
        _write(sweep_csv(primes), args.out)
        return EXIT_OK
    r = markoff_orbits(args.p)
    lines = [f"p = {r.p}", f"points: {r.point_count}",
             f"Out orbits: {r.out_orbit_sizes}", f"Out+ orbits: {r.out_plus_orbit_sizes}",
             f"transitive: {str(r.transitive_out).lower()}",
             f"divisibility: {str(r.divisibility_ok).lower()}",
             f"strong approximation: {str(r.strong_approx).lower()}"]
    if args.crosscheck:
        cc = crosscheck_epi_bijection(args.p)
        lines.append(f"crosscheck: markoff_count={cc['markoff_count']} "
                     f"epi_trace_count={cc['epi_trace_count']}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_epi(args) -> int:
    from gsa.atlas import parse_group_spec
    from gsa.epi import enumerate_epi_ext
    from gsa.perm import format_cycles
    from gsa.permgroup.families import standard_groups

    sg = standard_groups(parse_group_spec(args.group))
    classes = enumerate_epi_ext(sg.group)
    lines = [f"{sg.name}: |G| = {sg.group.order}, |Epi^ext| = {len(classes)}"]
    if args.list:
        for e in classes:
            x, y = e.canonical_pair
            lines.append(f"{e.hash_key:016x}  x={format_cycles(x.images)}  "
                         f"y={format_cycles(y.images)}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    from gsa.atlas import CapError, SpecError
    from gsa.congruence import CapExceeded
    from gsa.epi import BudgetExceeded
    from gsa.modular import ConsistencyError
    from gsa.permgroup.elements import GroupTooLarge

    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"atlas": _cmd_atlas, "markoff": _cmd_markoff, "epi": _cmd_epi}[args.cmd]
    try:
        return handler(args)
    except (CapError, CapExceeded, BudgetExceeded, GroupTooLarge) as exc:
        print(f"gsa: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ConsistencyError, AssertionError) as exc:
        print(f"gsa: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (SpecError, ValueError, OSError) as exc:
        print(f"gsa: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
