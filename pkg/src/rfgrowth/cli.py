"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 bad configuration or input,
3 sequence table too shallow for the requested n, 4 no word-problem oracle
for the presentation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Sequence

from rfgrowth import neumann
from rfgrowth.fp_quotients import DEFAULT_MAX_DEGREE, Presentation, PresentationError, minimal_detecting_quotient
from rfgrowth.oracles import FreeAbelianOracle, FreeGroupOracle, IntegersOracle, OracleUnavailable, cyclic_oracle
from rfgrowth.rf_growth import rf_growth_table
from rfgrowth.sequences import GrowthFunction, GrowthOverflow, SequenceTable, build, to_decimal, verify_clauses

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_SHALLOW = 3
EXIT_NO_ORACLE = 4

DEFAULT_MAX_ORDER = 5040
COMMANDS = ("sequences", "verify", "certificate", "rfgrowth", "quotients")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    f: str = "identity"
    K: int = 3
    n: int | None = None
    radius: str | None = None
    max_degree: int = DEFAULT_MAX_DEGREE
    max_order: int = DEFAULT_MAX_ORDER
    workers: int = 1
    out: str | None = None
    format: str = "json"
    table: str | None = None
    presentation: str | None = None
    oracle: str | None = None
    element: str | None = None
    exhaustive: bool = False
    no_prune: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.K < 1:
            raise ConfigError(f"K must be >= 1, got {self.K}")
        for name in ("max_degree", "max_order", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name.replace('_', '-')} must be positive")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.format!r}")

    @classmethod
    def from_mapping(cls, data: dict) -> RunConfig:
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def radii(self) -> list[int]:
        text = self.radius if self.radius is not None else (str(self.n) if self.n is not None else None)
        if text is None:
            raise ConfigError("rfgrowth needs --radius or --n")
        return parse_radii(text)


def parse_radii(text: str) -> list[int]:
    """``6``, ``1..12`` or ``1,2,5``."""
    values: set[int] = set()
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)\.\.(\d+)", part)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if lo > hi:
                raise ConfigError(f"empty radius range {part!r}")
            values.update(range(lo, hi + 1))
        elif part.isdigit():
            values.add(int(part))
        else:
            raise ConfigError(f"bad radius {part!r}")
    if not values or min(values) < 1:
        raise ConfigError("radii must be >= 1")
    return sorted(values)


def _growth_function(spec: str) -> GrowthFunction:
    try:
        return GrowthFunction(spec)
    except FileNotFoundError as exc:
        raise ConfigError(str(exc)) from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(cfg: RunConfig, payload: dict, started: float) -> None:
    payload.setdefault("timing", {})["elapsed_ms"] = round((time.perf_counter() - started) * 1000, 3)
    _emit(cfg, json.dumps(payload, indent=2) + "\n")


def _require_json(cfg: RunConfig) -> None:
    if cfg.format != "json":
        raise ConfigError(f"{cfg.command} only writes json")


def cmd_sequences(cfg: RunConfig) -> int:
    started = time.perf_counter()
    f = _growth_function(cfg.f)
    try:
        table = build(f, cfg.K)
    except GrowthOverflow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    report = verify_clauses(table, f)
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "p", "q", "d"])
        for k in range(1, table.K + 2):
            row = [k, to_decimal(table.p[k - 1])]
            row += [to_decimal(table.q[k - 1]), to_decimal(table.d[k - 1])] if k <= table.K else ["", ""]
            writer.writerow(row)
        _emit(cfg, buf.getvalue())
    else:
        _emit_json(cfg, {"f": cfg.f, "table": table.to_dict(), "clauses": report.to_dict()}, started)
    for c in report.failures():
        print(f"clause ({c.clause}) failed at k={c.index}: {c.detail}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAILED


def _load_table(cfg: RunConfig, f: GrowthFunction) -> SequenceTable:
    if cfg.table is None:
        return build(f, cfg.K)
    try:
        return SequenceTable.from_json(Path(cfg.table).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"table file not found: {cfg.table}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad table file {cfg.table}: {exc}") from exc


def cmd_verify(cfg: RunConfig) -> int:
    started = time.perf_counter()
    _require_json(cfg)
    f = _growth_function(cfg.f)
    try:
        table = _load_table(cfg, f)
    except GrowthOverflow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    report = verify_clauses(table, f)
    try:
        matrix = neumann.detection_matrix(table)
    except ValueError as exc:
        matrix = None
        print(f"detection matrix not computable: {exc}", file=sys.stderr)
    diagonal = matrix is not None and all(
        matrix[j][k] == (j == k) for j in range(table.K) for k in range(table.K)
    )
    payload = {
        "f": cfg.f,
        "K": table.K,
        "detection_matrix": matrix,
        "diagonal": diagonal,
        "clauses": report.to_dict(),
    }
    _emit_json(cfg, payload, started)
    for c in report.failures():
        print(f"clause ({c.clause}) failed at k={c.index}: {c.detail}", file=sys.stderr)
    return EXIT_OK if diagonal and report.passed else EXIT_FAILED


def cmd_certificate(cfg: RunConfig) -> int:
    started = time.perf_counter()
    _require_json(cfg)
    if cfg.n is None:
        raise ConfigError("certificate needs --n")
    if cfg.n < neumann.MIN_CERTIFIED_LENGTH:
        raise ConfigError(f"certificates start at n = {neumann.MIN_CERTIFIED_LENGTH}, got {cfg.n}")
    f = _growth_function(cfg.f)
    try:
        table = _load_table(cfg, f)
        cert = neumann.growth_certificate(cfg.n, f, table)
    except neumann.TableTooShallow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SHALLOW
    except GrowthOverflow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    problems = neumann.validate_certificate(cert, f, table)
    payload = cert.to_dict()
    payload["valid"] = not problems
    payload["problems"] = problems
    _emit_json(cfg, payload, started)
    return EXIT_OK if not problems else EXIT_FAILED


def _load_presentation(cfg: RunConfig) -> Presentation:
    if cfg.presentation is None:
        raise ConfigError(f"{cfg.command} needs a presentation file")
    try:
        return Presentation.from_file(cfg.presentation)
    except FileNotFoundError as exc:
        raise ConfigError(f"presentation file not found: {cfg.presentation}") from exc
    except PresentationError as exc:
        raise ConfigError(f"cannot parse {cfg.presentation}: {exc}") from exc


def _commutator_set(p: Presentation) -> set:
    out = set()
    for i in range(1, p.rank + 1):
        for j in range(i + 1, p.rank + 1):
            out.add((i, j, -i, -j))
    return out


def _cyclic_relator(r) -> bool:
    return len(set(r)) == 1


def select_oracle(p: Presentation, name: str | None):
    """Named oracle, or one recognized from the relators.

    Recognized: no relators (free group, or Z on one generator), a single
    power ``a^n`` on one generator, and the commutator presentation of Z^r
    for r <= 3.  A named oracle must kill every relator.
    """
    if name is None:
        rels = set(p.relators)
        if not rels:
            oracle = IntegersOracle(p.alphabet) if p.rank == 1 else FreeGroupOracle(p.alphabet)
        elif p.rank == 1 and len(rels) == 1 and _cyclic_relator(p.relators[0]):
            oracle = cyclic_oracle(len(p.relators[0]), p.alphabet)
        elif 2 <= p.rank <= 3 and {_canonical_commutator(r) for r in rels} == _commutator_set(p):
            oracle = FreeAbelianOracle(p.alphabet)
        else:
            raise OracleUnavailable("no builtin oracle recognizes this presentation; pass --oracle")
    else:
        try:
            if name == "integers":
                oracle = IntegersOracle(p.alphabet)
            elif name == "free":
                oracle = FreeGroupOracle(p.alphabet)
            elif name == "free-abelian":
                oracle = FreeAbelianOracle(p.alphabet)
            elif name.startswith("cyclic:"):
                if p.rank != 1:
                    raise ValueError("cyclic oracle needs one generator")
                oracle = cyclic_oracle(int(name.split(":", 1)[1]), p.alphabet)
            else:
                raise ConfigError(f"unknown oracle {name!r}")
        except ConfigError:
            raise
        except ValueError as exc:
            raise OracleUnavailable(str(exc)) from exc
        for r in p.relators:
            if not oracle.is_trivial(r):
                raise OracleUnavailable(f"oracle {name} does not satisfy relator {p.alphabet.format(r)}")
    return oracle


def _canonical_commutator(r) -> tuple | None:
    """Rewrite a commutator relator as ``(i, j, -i, -j)`` with i < j."""
    if len(r) != 4:
        return None
    a, b, c, d = r
    if c != -a or d != -b or abs(a) == abs(b):
        return None
    i, j = sorted((abs(a), abs(b)))
    return (i, j, -i, -j)


def cmd_rfgrowth(cfg: RunConfig) -> int:
    started = time.perf_counter()
    p = _load_presentation(cfg)
    radii = cfg.radii()
    try:
        oracle = select_oracle(p, cfg.oracle)
    except OracleUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_ORACLE
    rows = rf_growth_table(p, oracle, radii, cfg.max_order, max_degree=cfg.max_degree, workers=cfg.workers)
    fmt = p.alphabet.format
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "D", "elapsed_ms", "witness_element", "witness_min_order"])
        for row in rows:
            if row.value is None:
                writer.writerow([row.n, "not-found", f"{row.elapsed_ms:.3f}", fmt(row.undetected[0]), ""])
            else:
                writer.writerow([row.n, row.value, f"{row.elapsed_ms:.3f}", fmt(row.witness), row.witness_order])
        _emit(cfg, buf.getvalue())
    else:
        out_rows = []
        for row in rows:
            out_rows.append(
                {
                    "n": row.n,
                    "D": row.value,
                    "found": row.value is not None,
                    "witness_element": fmt(row.witness) if row.witness is not None else None,
                    "witness_min_order": row.witness_order,
                    "undetected": [fmt(w) for w in row.undetected],
                    "elements": [
                        det.to_dict(p.alphabet) if det is not None else {"element": fmt(w), "min_order": None}
                        for w, det in zip(row.elements, row.details)
                    ],
                }
            )
        payload = {"presentation": p.to_text(), "max_order": cfg.max_order, "max_degree": cfg.max_degree}
        payload["rows"] = out_rows
        payload["timing"] = {"elapsed_ms_by_radius": {str(r.n): round(r.elapsed_ms, 3) for r in rows}}
        _emit_json(cfg, payload, started)
    for row in rows:
        if row.value is None:
            print(f"n={row.n}: {len(row.undetected)} element(s) not detected within bounds", file=sys.stderr)
    return EXIT_OK


def cmd_quotients(cfg: RunConfig) -> int:
    started = time.perf_counter()
    _require_json(cfg)
    p = _load_presentation(cfg)
    if cfg.element is None:
        raise ConfigError("quotients needs --element")
    try:
        gamma = p.alphabet.parse(cfg.element)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    det = minimal_detecting_quotient(
        p,
        gamma,
        cfg.max_order,
        max_degree=cfg.max_degree,
        pruned=not cfg.no_prune,
        exhaustive=cfg.exhaustive,
        workers=cfg.workers,
    )
    payload = {"element": p.alphabet.format(gamma), "found": det is not None}
    if det is not None:
        payload.update(det.to_dict(p.alphabet))
        payload["exact"] = det.exact
    _emit_json(cfg, payload, started)
    return EXIT_OK


HANDLERS = {
    "sequences": cmd_sequences,
    "verify": cmd_verify,
    "certificate": cmd_certificate,
    "rfgrowth": cmd_rfgrowth,
    "quotients": cmd_quotients,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of RunConfig keys; flags override it")
    common.add_argument("--f", help="growth function: identity, poly:c, exp2, exp:b, table:path")
    common.add_argument("--K", type=int, help="truncation level")
    common.add_argument("--n", type=int, help="word length")
    common.add_argument("--radius", help="radii: 6, 1..12 or 1,2,5")
    common.add_argument("--max-degree", type=int, dest="max_degree")
    common.add_argument("--max-order", type=int, dest="max_order")
    common.add_argument("--workers", type=int)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=["json", "csv"])

    parser = argparse.ArgumentParser(prog="rfgrowth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sequences", parents=[common], help="build p, q, d and check the clauses")
    verify = sub.add_parser("verify", parents=[common], help="detection matrix of witness words")
    verify.add_argument("--table", help="sequence table JSON to check instead of building one")
    cert = sub.add_parser("certificate", parents=[common], help="lower-bound certificate at length n")
    cert.add_argument("--table", help="sequence table JSON")
    rf = sub.add_parser("rfgrowth", parents=[common], help="D(n) of a finitely presented group")
    rf.add_argument("presentation", nargs="?", help="file with 'gens:' and 'rel:' lines")
    rf.add_argument("--oracle", help="integers, cyclic:N, free or free-abelian")
    quo = sub.add_parser("quotients", parents=[common], help="least quotient detecting one element")
    quo.add_argument("presentation", nargs="?")
    quo.add_argument("--element", help="word to detect, e.g. abAB")
    quo.add_argument("--exhaustive", action="store_true", default=None, help="search every degree up to the cap")
    quo.add_argument("--no-prune", action="store_true", default=None, dest="no_prune")
    return parser


def parse_config(argv: Sequence[str] | None = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    data: dict = {}
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {args.config}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        data.update(loaded)
    for key, value in vars(args).items():
        if key == "config" or value is None:
            continue
        data[key] = value
    return RunConfig.from_mapping(data)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
        return HANDLERS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
