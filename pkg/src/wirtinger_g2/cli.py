"""Command-line front end.

Subcommands ``intersect``, ``periods``, ``verify`` and ``fd`` read a JSON (or
TOML) config and print a JSON document. Exit codes: 0 success, 1 failed
check, 2 config or validation error, 3 numeric-domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .cohomology import (
    build_C,
    det_C_minus_closed,
    det_C_plus_closed,
    genus2_forms,
    intersect_Y_cohomology,
)
from .errors import ConfigError, ParseError, WirtingerError
from .homology import PM_BASIS, build_H, det_H_closed, h_blocks, intersect_Y_homology
from .multivalued import BranchConfig
from .params import (
    ExponentVector,
    LauricellaParams,
    TwistSpec,
    as_float,
    derive_exponents,
    validate_admissible,
)
from .periods import fd_series, fd_via_quadrature, period_matrix, pm_cycles
from .quadrature import QuadratureSpec
from .verify import SUITES, SuiteConfig, lauricella_from_exponents, run_suite

SCHEMA = "wirtinger-g2/1"

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass(frozen=True)
class Config:
    exponents: ExponentVector
    z: tuple
    lauricella: LauricellaParams | None = None
    quadrature: QuadratureSpec = QuadratureSpec()
    seed: int = 0
    output: str | None = None
    echo: dict | None = None


def _scalar(x: Any, field: str):
    if isinstance(x, bool):
        raise ParseError("booleans are not numbers", field)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            try:
                return complex(x.replace(" ", ""))
            except ValueError:
                raise ParseError(f"cannot read number {x!r}", field) from None
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    raise ParseError(f"cannot read number {x!r}", field)


def _load(text: str, name: str) -> dict:
    if name.endswith(".toml"):
        try:
            return tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ParseError(f"invalid TOML: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        try:
            return tomllib.loads(text)
        except tomllib.TOMLDecodeError:
            raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None


def parse_config(source: str | Path | dict) -> Config:
    """Read and validate a config from a path, ``'-'`` (stdin) or a mapping."""
    if isinstance(source, dict):
        doc = source
    elif str(source) == "-":
        doc = _load(sys.stdin.read(), "<stdin>")
    else:
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ParseError(f"cannot read config: {exc}") from None
        doc = _load(text, path.name)
    if not isinstance(doc, dict):
        raise ParseError("config must be a mapping")
    has_l, has_e = "lauricella" in doc, "exponents" in doc
    if has_l == has_e:
        raise ParseError("exactly one of 'lauricella' and 'exponents' is required", "lauricella/exponents")
    if "z" not in doc:
        raise ParseError("missing branch points", "z")
    z = doc["z"]
    if not isinstance(z, list) or len(z) != 3:
        raise ParseError("z must list three numbers", "z")
    z = tuple(complex(_scalar(x, "z")) for x in z)
    z = tuple(x.real if x.imag == 0 else x for x in z)
    lauricella = None
    if has_l:
        block = doc["lauricella"]
        if not isinstance(block, dict) or set(block) != {"a", "b1", "b2", "b3", "c"}:
            raise ParseError("lauricella needs exactly a, b1, b2, b3, c", "lauricella")
        lauricella = LauricellaParams(*(_scalar(block[k], f"lauricella.{k}") for k in ("a", "b1", "b2", "b3", "c")))
        v = derive_exponents(lauricella)
    else:
        vals = doc["exponents"]
        if not isinstance(vals, list) or len(vals) != 6:
            raise ParseError("exponents must list c0..c5", "exponents")
        v = ExponentVector(tuple(_scalar(x, "exponents") for x in vals))
        validate_admissible(v)
    qdoc = doc.get("quadrature", {})
    if not isinstance(qdoc, dict):
        raise ParseError("quadrature must be a mapping", "quadrature")
    try:
        q = QuadratureSpec(**qdoc)
    except TypeError as exc:
        raise ParseError(str(exc), "quadrature") from None
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ParseError("seed must be an integer", "seed")
    return Config(v, z, lauricella, q, seed, doc.get("output"), doc)


# -- output ----------------------------------------------------------------


def _c(x) -> list[float]:
    x = complex(x)
    return [x.real, x.imag]


def _matrix(m: np.ndarray) -> list:
    return [[_c(x) for x in row] for row in np.asarray(m)]


def _echo(cfg: Config) -> dict:
    return json.loads(json.dumps(cfg.echo or {}, default=str))


def _document(cfg: Config, command: str, **payload) -> dict:
    doc = {"schema": SCHEMA, "command": command, "config_echo": _echo(cfg)}
    doc.update(payload)
    return doc


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# -- commands --------------------------------------------------------------


def cmd_intersect(cfg: Config, space: str, pairing: str, twist: str) -> dict:
    v = as_float(cfg.exponents)
    spec = TwistSpec(v, f_twist=1 if twist == "f" else 0)
    notes: dict[str, Any] = {}
    if space == "X":
        if twist == "f":
            raise ConfigError("X matrices are defined for the untwisted local system only")
        if pairing == "cohomology":
            m = build_C(v, BranchConfig(*cfg.z))
            z = [complex(x) for x in cfg.z]
            closed = (2j * np.pi) ** 8 * det_C_plus_closed(v) * det_C_minus_closed(v, z)
        else:
            m = build_H(v)
            closed = 0.5**8 * det_H_closed(v, 1) * det_H_closed(v, -1)
    else:
        eff = spec.effective_vector()
        if pairing == "cohomology":
            m = intersect_Y_cohomology(v, spec)
            e0, e1, e2, e3, e4, e5 = eff.c
            closed = (2j * np.pi) ** 4 * (-e3 / (e0 * e1 * e2 * e4 * e5)) / 16
        else:
            m = intersect_Y_homology(spec)
            closed = det_H_closed(eff, 1)
            if twist == "f":
                minus = np.array(h_blocks(v)[1], dtype=complex)
                notes["max_deviation_from_H(-1)"] = float(np.abs(m.entries - minus).max())
    det = complex(np.linalg.det(m.entries))
    return {
        "matrices": {
            "intersection": {
                "pairing": m.pairing,
                "rows": list(m.row_labels),
                "cols": list(m.col_labels),
                "entries": _matrix(m.entries),
            }
        },
        "determinant": {"numeric": _c(det), "closed_form": _c(closed), "relative_deviation": abs(det - closed) / abs(closed)},
        "notes": notes,
    }


def cmd_periods(cfg: Config) -> dict:
    v = as_float(cfg.exponents)
    bc = BranchConfig(*cfg.z)
    P = period_matrix(pm_cycles(), genus2_forms(bc), TwistSpec(v), bc, cfg.quadrature, row_labels=PM_BASIS)
    return {
        "matrices": {
            "periods": {
                "rows": list(P.rows),
                "cols": list(P.cols),
                "entries": _matrix(P.entries),
                "errors": P.errors.tolist(),
                "flagged": P.flagged.tolist(),
            }
        }
    }


def cmd_fd(cfg: Config) -> dict:
    if cfg.lauricella is not None:
        p = cfg.lauricella
    else:
        p = lauricella_from_exponents(cfg.exponents)
    value = fd_series(p, cfg.z)
    out: dict[str, Any] = {"fd": {"series": _c(value)}}
    zs = [complex(x) for x in cfg.z]
    if all(x.imag == 0 for x in zs) and 0 < zs[0].real < zs[1].real < zs[2].real < 1:
        quad = fd_via_quadrature(p, BranchConfig(*cfg.z), cfg.quadrature)
        out["fd"]["quadrature"] = _c(quad)
        out["fd"]["relative_deviation"] = abs(quad - value) / abs(value)
    return out


def cmd_verify(cfg: Config, suite: str) -> tuple[dict, bool]:
    sc = SuiteConfig(
        exponents=tuple(as_float(cfg.exponents).c),
        z=tuple(cfg.z),
        seed=cfg.seed,
        tol=cfg.quadrature.tol,
        lauricella=None if cfg.lauricella is None else tuple(
            complex(getattr(cfg.lauricella, k)) for k in ("a", "b1", "b2", "b3", "c")
        ),
    )
    report = run_suite(sc, suite)
    body = report.to_dict(include_timing=False)
    return {"checks": body["checks"], "versions": body["versions"], "passed": report.passed}, report.passed


# -- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON or TOML config path ('-' for stdin)")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--tol", type=float, help="quadrature tolerance")
    common.add_argument("--out", help="write the JSON document here instead of stdout")
    parser = argparse.ArgumentParser(prog="wirtinger-g2", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("intersect", parents=[common], help="intersection matrices")
    p.add_argument("--space", choices=("X", "Y"), default="X")
    p.add_argument("--pairing", choices=("homology", "cohomology"), default="cohomology")
    p.add_argument("--twist", choices=("raw", "f"), default="raw")
    sub.add_parser("periods", parents=[common], help="8x8 period matrix on X")
    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("--suite", choices=SUITES, default="all")
    sub.add_parser("fd", parents=[common], help="Lauricella F_D value")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        if args.tol is not None:
            cfg = replace(cfg, quadrature=replace(cfg.quadrature, tol=args.tol))
    except (WirtingerError, ValueError) as exc:
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = args.out or cfg.output
    code = EXIT_OK
    try:
        if args.command == "intersect":
            payload = cmd_intersect(cfg, args.space, args.pairing, args.twist)
        elif args.command == "periods":
            payload = cmd_periods(cfg)
        elif args.command == "fd":
            payload = cmd_fd(cfg)
        else:
            payload, ok = cmd_verify(cfg, args.suite)
            code = EXIT_OK if ok else EXIT_FAIL
    except (ConfigError, ValueError) as exc:
        print(f"validation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (WirtingerError, ArithmeticError) as exc:
        print(f"numeric error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(_document(cfg, args.command, **payload), out)
    return code
