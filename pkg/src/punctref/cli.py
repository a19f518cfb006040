"""Deterministic command-line front end over the fixture corpus.

Every command reads one JSON fixture, emits a single JSON report on stdout
(command, input digest, library version, result), and exits 0 on success, 1
when a mathematical inconsistency is found (failed identity, insensitive
subdivision, validation violations, incomplete enumeration), or 2 on
malformed input with a JSON-path diagnostic on stderr. Output is
byte-identical across runs; --threads is accepted for interface stability
but execution is always sequential, which costs nothing at corpus scale.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .blowups import check_slope_sensitivity, compare_under_subdivision
from .chowring import serialize
from .conecx import validate_complex
from .fixtureio import (
    Fixture,
    SchemaError,
    complex_to_json,
    data_to_json,
    load_fixture_file,
    load_rooting_file,
    load_subdivision_arg,
    types_to_json,
)
from .gerby import check_pushforward_identity_on_complex, rooting_data
from .puncture import (
    PrincipalizationError,
    normalized_ideal,
    principalize,
    refined_class,
    segre_class,
)
from .tropmaps import (
    BalancingError,
    EnumerationBoundError,
    NonSmoothConeError,
    assemble_complex,
    enumerate_types,
    positivize,
    validate_numerical_data,
)

_COMMANDS = (
    "validate",
    "enumerate",
    "refined-class",
    "segre",
    "twisted-check",
    "compare-blowup",
    "positivize",
    "sensitivity",
)


_SECTION_NAMES = {
    "data": "data",
    "model": "strata",
    "complex": "complex",
    "offsets": "complex.offsets",
    "trace": "trace",
    "lifted_offsets": "lifted_offsets",
}


def _require(fixture: Fixture, what: str) -> None:
    missing = [name for name in what.split("+") if getattr(fixture, name) is None]
    if missing:
        raise SchemaError(
            "$",
            "this command needs fixture sections: "
            + ", ".join(_SECTION_NAMES[m] for m in missing),
        )


def _trace_json(trace) -> list[dict]:
    return [{"center": list(s.center), "new": s.new_ray} for s in trace]


def _complex_and_offsets(fixture: Fixture):
    if fixture.complex is not None and fixture.offsets is not None:
        return fixture.complex, fixture.offsets
    if fixture.data is not None and fixture.model is not None:
        types = enumerate_types(fixture.data, fixture.model)
        return assemble_complex(fixture.data, types)
    raise SchemaError(
        "$", "need either complex with offsets or data with strata"
    )


def _cmd_validate(fixture: Fixture, args) -> tuple[dict, int]:
    report: dict = {}
    ok = True
    if fixture.complex is not None:
        report["complex"] = validate_complex(fixture.complex)
        ok = ok and report["complex"]["ok"]
    if fixture.offsets is not None:
        report["offsets"] = {"ok": True, "count": len(fixture.offsets.offsets)}
    if fixture.data is not None:
        report["data"] = validate_numerical_data(fixture.data)
        ok = ok and report["data"]["ok"]
    if fixture.model is not None:
        report["strata"] = {"ok": True, "count": len(fixture.model.strata)}
    report["ok"] = ok
    return report, 0 if ok else 1


def _cmd_enumerate(fixture: Fixture, args) -> tuple[dict, int]:
    _require(fixture, "data+model")
    types = enumerate_types(fixture.data, fixture.model)
    c, pd = assemble_complex(fixture.data, types)
    return {
        "complex": complex_to_json(c, pd),
        "types": types_to_json(fixture.data, types),
        "count": len(types),
    }, 0


def _cmd_refined_class(fixture: Fixture, args) -> tuple[dict, int]:
    c, pd = _complex_and_offsets(fixture)
    res = refined_class(c, pd, backend=args.backend)
    result = {
        "class": serialize(res.cls),
        "k_P": pd.k_P,
        "components": [list(comp) for comp in res.components],
    }
    if args.trace:
        result["trace"] = _trace_json(res.trace)
    return result, 0


def _cmd_segre(fixture: Fixture, args) -> tuple[dict, int]:
    c, pd = _complex_and_offsets(fixture)
    ideal = normalized_ideal(c, pd)
    cls = segre_class(c, ideal, max_codim=args.max_codim, backend=args.backend)
    generators = []
    for (oid, _), gen in zip(pd.offsets, ideal.generators):
        values = {r: int(v) for r, v in sorted(gen.as_dict().items())}
        generators.append({"puncture": oid, "values": values})
    result = {"class": serialize(cls), "generators": generators}
    if args.trace:
        _, trace, _ = principalize(c, ideal)
        result["trace"] = _trace_json(trace)
    return result, 0


def _cmd_twisted_check(fixture: Fixture, args) -> tuple[dict, int]:
    _require(fixture, "complex+offsets")
    if (args.r is None) == (args.rooting is None):
        raise SchemaError("$", "twisted-check needs exactly one of --r or --rooting")
    if args.r is not None:
        r, s = tuple(args.r), None
    else:
        r, s = load_rooting_file(args.rooting)
    rd = rooting_data(r, s)
    report = check_pushforward_identity_on_complex(
        fixture.complex, fixture.offsets, rd, backend=args.backend
    )
    return report, 0 if report["equal"] else 1


def _cmd_compare_blowup(fixture: Fixture, args) -> tuple[dict, int]:
    _require(fixture, "complex+offsets+trace+lifted_offsets")
    report = compare_under_subdivision(
        fixture.complex, fixture.offsets, fixture.trace, fixture.lifted_offsets
    )
    return report, 0


def _cmd_positivize(fixture: Fixture, args) -> tuple[dict, int]:
    _require(fixture, "data")
    out = positivize(fixture.data)
    return {"input": data_to_json(fixture.data), "positivized": data_to_json(out)}, 0


def _cmd_sensitivity(fixture: Fixture, args) -> tuple[dict, int]:
    _require(fixture, "data+model")
    subdiv = load_subdivision_arg(args.subdivision, fixture.data.k)
    report = check_slope_sensitivity(fixture.data, fixture.model, subdiv)
    return report, 0 if report["sensitive"] else 1


_HANDLERS = {
    "validate": _cmd_validate,
    "enumerate": _cmd_enumerate,
    "refined-class": _cmd_refined_class,
    "segre": _cmd_segre,
    "twisted-check": _cmd_twisted_check,
    "compare-blowup": _cmd_compare_blowup,
    "positivize": _cmd_positivize,
    "sensitivity": _cmd_sensitivity,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="punctref",
        description="Refined classes of punctured tropical map moduli.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", help="fixture JSON file")
        p.add_argument(
            "--backend",
            choices=["resolution", "aluffi-crosscheck"],
            default="resolution",
            help="Segre-class computation backend",
        )
        p.add_argument(
            "--max-codim",
            type=int,
            default=None,
            metavar="N",
            help="truncation codimension for segre",
        )
        p.add_argument(
            "--threads",
            type=int,
            default=1,
            metavar="N",
            help="accepted for interface stability; execution is sequential",
        )
        p.add_argument(
            "--trace",
            action="store_true",
            help="include the subdivision trace in the result",
        )
        if name == "twisted-check":
            p.add_argument("--r", type=int, nargs="+", metavar="R",
                           help="rooting orders, one per divisor direction")
            p.add_argument("--rooting", metavar="FILE",
                           help="rooting JSON file with r and optional s")
        if name == "sensitivity":
            p.add_argument("--subdivision", default="trivial",
                           metavar="trivial|barycentric|FILE",
                           help="fan to test (default: trivial)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return 2
    if args.max_codim is not None and args.max_codim < 0:
        print("error: --max-codim must be nonnegative", file=sys.stderr)
        return 2
    try:
        fixture, raw = load_fixture_file(args.input)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as e:
        print(f"error: cannot read input: {e}", file=sys.stderr)
        return 2
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        result, code = _HANDLERS[args.command](fixture, args)
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (
        EnumerationBoundError,
        PrincipalizationError,
        NonSmoothConeError,
        BalancingError,
        ArithmeticError,
    ) as e:
        print(f"inconsistency: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    envelope = {
        "command": args.command,
        "input_sha256": hashlib.sha256(raw).hexdigest(),
        "version": __version__,
        "result": result,
    }
    print(json.dumps(envelope, sort_keys=True, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
