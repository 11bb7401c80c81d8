"""Command-line front end: reproducible report generation.

Every command prints a single JSON envelope to stdout: the command, a
digest of the exact inputs, the artifact version, the result payload, and
timing.  The payload is deterministic byte for byte on identical inputs
(stable key order, rationals as num/den strings); timing lives outside the
payload.  Exit codes: 0 success, 2 usage, 3 domain error, 4 incomplete
configuration.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from importlib import resources

from . import __version__
from .errors import DomainError, IncompleteConfigError, Selmer3Error
from .localclass import classify_integral, h1_dims, integral_representative
from .localfield import Place
from .prym import family_report, load_preset
from .selmerratio import (
    IsogenyDescriptor,
    KappaEntry,
    LocalPlaceProfile,
    RatioConfig,
    cm_ratio_check,
    global_report,
    tk_partition,
)
from .twistfamilies import TwistFamily, family_preset

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_INCOMPLETE = 4


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _digest(inputs) -> str:
    return hashlib.sha256(_canonical(inputs).encode()).hexdigest()


def _emit(command: str, inputs, result, started: float) -> None:
    envelope = {
        "schema": 1,
        "command": command,
        "config_digest": _digest(inputs),
        "artifact_version": __version__,
        "result": result,
        "timing": {"seconds": round(time.perf_counter() - started, 6)},
    }
    print(json.dumps(envelope, sort_keys=True, indent=2))


def _default_ratio_config() -> RatioConfig:
    # trivial overrides: kernel of square class 1, split extension classes,
    # ratio 1 at the place over 3
    desc = IsogenyDescriptor(
        m=1,
        global_summand_bit=True,
        kappa_orders=(KappaEntry(0, "any", 1, 1), KappaEntry(1, "any", 1, 1)),
        name="trivial-overrides",
    )
    profiles = (
        LocalPlaceProfile(Place.real()),
        LocalPlaceProfile(Place.finite(3), reduction="bad", override_exponent=0),
    )
    return RatioConfig(desc, profiles)


def cmd_classify(args, started: float) -> int:
    d = Fraction(args.d)
    classes = classify_integral(args.p, d)
    dims = h1_dims(Place.finite(args.p), d)
    rows = []
    for cls in classes:
        obj = cls.to_json_obj()
        if cls.integral:
            obj["representative"] = integral_representative(args.p, d, cls).to_json_obj()
        rows.append(obj)
    result = {
        "p": args.p,
        "d": str(d),
        "h1_dim": dims[0],
        "h1_dim_unramified": dims[1],
        "classes": rows,
    }
    _emit("classify", {"p": args.p, "d": str(d)}, result, started)
    return EXIT_OK


def _cm_result(obj: dict) -> dict:
    check = cm_ratio_check(int(obj["g"]), int(obj["complex_places"]))
    per_isogeny_arch = check.archimedean_exponent // (2 * check.g)
    per_isogeny_over3 = check.three_adic_exponent // (2 * check.g)
    return {
        "kind": "cm-closed-form",
        "cm_check": check.to_json_obj(),
        "pi_report": {
            "places": [
                {"place": f"complex x {check.complex_places}", "k": per_isogeny_arch},
                {"place": "over-3", "k": per_isogeny_over3},
            ],
            "global_k": check.pi_exponent,
        },
    }


def cmd_ratio(args, started: float) -> int:
    if args.preset and args.config:
        raise DomainError("give either --preset or --config, not both")
    if args.preset == "cm":
        text = resources.files("selmer3.presets").joinpath("cm.json").read_text()
        obj = json.loads(text)
        if obj.get("schema") != 1:
            raise DomainError("unsupported cm-preset schema")
        result = _cm_result(obj)
        _emit("ratio", {"preset": "cm"}, result, started)
        return EXIT_OK
    if args.preset:
        config = load_preset(args.preset)
        if args.d is None:
            raise DomainError("--d is required with a prym preset")
        from .prym import assemble_local_exponents

        assembly = assemble_local_exponents(config, Fraction(args.d))
        result = {
            "kind": "prym-pi",
            "assembly": assembly.to_json_obj(),
            "pi": {
                "places": [
                    {"place": p.place_label, "k": p.pair[0] + p.pair[1], "provenance": p.provenance}
                    for p in assembly.places
                ],
                "global_k": assembly.k_pi,
                "parity": assembly.parity,
            },
        }
        _emit("ratio", {"preset": args.preset, "d": args.d}, result, started)
        return EXIT_OK
    if not args.config:
        raise DomainError("--config or --preset is required")
    if args.d is None:
        raise DomainError("--d is required with --config")
    with open(args.config) as fh:
        text = fh.read()
    config = RatioConfig.from_json(text)
    report = global_report(list(config.profiles), config.descriptor, Fraction(args.d))
    _emit("ratio", {"config": json.loads(text), "d": args.d}, report.to_json_obj(), started)
    return EXIT_OK


def _load_family(args) -> tuple[TwistFamily, dict]:
    if args.family and args.family_preset:
        raise DomainError("give either --family or --family-preset, not both")
    if args.family_preset:
        return family_preset(args.family_preset), {"family_preset": args.family_preset}
    if not args.family:
        raise DomainError("--family or --family-preset is required")
    with open(args.family) as fh:
        obj = json.load(fh)
    return TwistFamily.from_json_obj(obj), {"family": obj}


def cmd_scan(args, started: float) -> int:
    family, family_input = _load_family(args)
    if args.config:
        with open(args.config) as fh:
            config = RatioConfig.from_json(fh.read())
        config_input: object = config.to_json_obj()
    else:
        config = _default_ratio_config()
        config_input = "trivial-overrides"
    cells = tk_partition(family, config.descriptor, list(config.profiles), args.height)
    cell_objs = [cells[k].to_json_obj() for k in sorted(cells)]
    result = {
        "height_bound": args.height,
        "family_name": family.name,
        "cells": cell_objs,
        "member_count": sum(c.count for c in cells.values()),
    }
    inputs = {**family_input, "config": config_input, "height": args.height}
    if args.format == "csv":
        _emit_csv(cell_objs)
        return EXIT_OK
    _emit("scan", inputs, result, started)
    return EXIT_OK


def _emit_csv(cell_objs) -> None:
    cols = ["k", "count", "exact_density", "avg_selmer", "avg_dim_bound", "dim_density_bound"]
    print(",".join(cols))
    for cell in cell_objs:
        print(",".join("" if cell[c] is None else str(cell[c]) for c in cols))


def cmd_prym(args, started: float) -> int:
    config = load_preset(args.preset)
    report = family_report(config, args.height)
    _emit("prym", {"preset": args.preset, "height": args.height}, report.to_json_obj(), started)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selmer3",
        description="Exact local classification of binary cubic forms and "
        "Selmer-ratio reports for 3-isogenies of sextic twist families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", help="local orbit classification at p")
    p_classify.add_argument("--p", type=int, required=True, help="prime > 3")
    p_classify.add_argument("--d", type=str, required=True, help="twist parameter (rational)")

    p_ratio = sub.add_parser("ratio", help="per-place Selmer-ratio report")
    p_ratio.add_argument("--config", type=str, help="ratio config JSON file")
    p_ratio.add_argument("--preset", type=str, help="named preset (cm, prym-a4)")
    p_ratio.add_argument("--d", type=str, help="twist parameter (rational)")

    p_scan = sub.add_parser("scan", help="T_k partition of a twist family")
    p_scan.add_argument("--family", type=str, help="family JSON file")
    p_scan.add_argument("--family-preset", type=str, help="named family preset")
    p_scan.add_argument("--config", type=str, help="ratio config JSON file")
    p_scan.add_argument("--height", type=int, required=True)
    p_scan.add_argument("--format", choices=("json", "csv"), default="json")

    p_prym = sub.add_parser("prym", help="family report for a Prym preset")
    p_prym.add_argument("--preset", type=str, required=True)
    p_prym.add_argument("--height", type=int, required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    handlers = {
        "classify": cmd_classify,
        "ratio": cmd_ratio,
        "scan": cmd_scan,
        "prym": cmd_prym,
    }
    try:
        return handlers[args.command](args, started)
    except IncompleteConfigError as err:
        print(f"error: incomplete configuration: {err}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except DomainError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except Selmer3Error as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
