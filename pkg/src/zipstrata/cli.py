"""
Command line front end.

    zipstrata strata               --n N --d D [--p P] [--format json|csv]
    zipstrata canonical-parabolic  --n N --d D --w "a,b,..." [--budget B]
    zipstrata canonical-flag       --n N --d D --w "a,b,..."
    zipstrata verify               --n N [--d D] [--p P] [--budget B]

JSON output is one object with ``config``, then ``rows`` (tables) or
``record`` (single stratum), then ``checks`` (``{name, pass, detail}``).
Keys are sorted and output is byte-for-byte reproducible.

Exit codes: 0 success, 1 property failure, 2 bad configuration, 3 bad ``w``,
4 a criterion scan contradicting the canonical-parabolic theorem.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, replace
from math import comb

from .canonical import (
    CriterionReport, DEFAULT_BUDGET, a1_order, canonical_data,
    canonical_parabolic_scan, stabilizer_dimension,
)
from .dieudonne import (
    CoordinateFlag, EXHAUSTIVE_MAX_N, canonical_flag, exhaustive_coarsest_flag,
    flag_stabilizer,
)
from .rootzip import (
    ParabolicDescriptor, Root, StratumDescriptor, enumerate_strata, gl_zip_datum,
    is_prime, is_stratum_parameter,
)
from .verify import run_suite
from .weyl import Permutation

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BAD_W, EXIT_THEOREM = 0, 1, 2, 3, 4

MAX_N_COMBINATORICS = 8
MAX_N_FIELD = 4
MAX_P = 5


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int
    d: int | None
    p: int = 2
    fmt: str = "json"
    budget: int = DEFAULT_BUDGET
    w: str | None = None

    def validate(self) -> None:
        if self.n < 2 or self.n > MAX_N_COMBINATORICS:
            raise ConfigError(f"n must lie in [2, {MAX_N_COMBINATORICS}], got {self.n}")
        if self.d is None:
            if self.command != "verify":
                raise ConfigError("--d is required")
        elif not 1 <= self.d <= self.n - 1:
            raise ConfigError(f"d must lie in [1, n-1], got d={self.d} for n={self.n}")
        if not is_prime(self.p) or self.p > MAX_P:
            raise ConfigError(f"p must be a prime <= {MAX_P}, got {self.p}")
        if self.budget < 0:
            raise ConfigError("budget must be nonnegative")
        if self.command in ("canonical-parabolic", "canonical-flag") and not self.w:
            raise ConfigError(f"{self.command} needs --w")

    def as_dict(self) -> dict:
        out = {"command": self.command, "n": self.n, "d": self.d, "p": self.p,
               "format": self.fmt, "budget": self.budget}
        if self.w is not None:
            out["w"] = self.w
        return out


class BadW(ValueError):
    pass


# encoders and their inverses

def encode_stratum(s: StratumDescriptor, stab: int, a1: int) -> dict:
    return {"w": str(s.w), "length": s.length, "dimension": s.dimension,
            "representative": str(s.representative), "stabilizer_dim": stab, "a1_order": a1}


def decode_stratum(row: dict) -> StratumDescriptor:
    return StratumDescriptor(Permutation.parse(row["w"]), int(row["length"]),
                             int(row["dimension"]), Permutation.parse(row["representative"]))


def encode_parabolic(P: ParabolicDescriptor) -> dict:
    return {"n": P.n, "type": sorted(P.type) if P.type is not None else None,
            "roots": sorted(str(r) for r in sorted(P.roots))}


def decode_parabolic(obj: dict) -> ParabolicDescriptor:
    t = obj.get("type")
    return ParabolicDescriptor(int(obj["n"]), frozenset(Root.parse(r) for r in obj["roots"]),
                               type=None if t is None else frozenset(t))


def encode_report(r: CriterionReport) -> dict:
    return {"P0_type": sorted(r.P0_type), "pi_is_isomorphism": r.pi_is_isomorphism,
            "has_coarse_closure": r.has_coarse_closure, "fine_dim": r.fine_dim,
            "coarse_dim": r.coarse_dim, "pi_degree": r.pi_degree,
            "open_by_dimension": r.open_by_dimension}


def decode_report(obj: dict) -> CriterionReport:
    return CriterionReport(frozenset(obj["P0_type"]), bool(obj["pi_is_isomorphism"]),
                           bool(obj["has_coarse_closure"]), int(obj["fine_dim"]),
                           int(obj["coarse_dim"]), obj.get("pi_degree"))


def encode_flag(flag: CoordinateFlag) -> dict:
    # members listed in the order their indices enter the flag
    ordered, members = [], []
    for block in flag.blocks():
        ordered = ordered + sorted(block)
        members.append(list(ordered))
    return {"n": flag.n, "chain": members, "interior": members[:-1],
            "block_sizes": list(flag.block_sizes())}


def decode_flag(obj: dict) -> CoordinateFlag:
    return CoordinateFlag(int(obj["n"]), (frozenset(),) + tuple(frozenset(m) for m in obj["chain"]))


# commands

def _parse_w(cfg: RunConfig, Z) -> Permutation:
    try:
        w = Permutation.parse(cfg.w)
    except ValueError as exc:
        raise BadW(str(exc)) from exc
    if w.n != cfg.n or not is_stratum_parameter(w, Z):
        raise BadW(f"{cfg.w} is not a stratum parameter for n={cfg.n}, d={cfg.d} "
                   f"(minimal in w W_J, J={sorted(Z.J)})")
    return w


def cmd_strata(cfg: RunConfig) -> tuple[dict, int]:
    Z = gl_zip_datum(cfg.n, cfg.d, cfg.p)
    rows = [encode_stratum(s, stabilizer_dimension(Z, s.w), a1_order(Z, s.w))
            for s in sorted(enumerate_strata(Z), key=lambda s: (s.length, s.w.images))]
    checks = [
        {"name": "row_count", "pass": len(rows) == comb(cfg.n, cfg.d),
         "detail": f"{len(rows)} strata"},
        {"name": "dimension_formula", "pass": all(r["dimension"] == r["length"] + Z.P.dim for r in rows),
         "detail": f"dim P = {Z.P.dim}"},
    ]
    ok = all(c["pass"] for c in checks)
    return {"config": cfg.as_dict(), "rows": rows, "checks": checks}, EXIT_OK if ok else EXIT_FAIL


def cmd_canonical_parabolic(cfg: RunConfig) -> tuple[dict, int]:
    Z = gl_zip_datum(cfg.n, cfg.d, cfg.p)
    w = _parse_w(cfg, Z)
    Pw, cert = canonical_parabolic_scan(Z, w, cfg.budget)
    data = canonical_data(Z, w)
    record = {
        "w": str(w),
        "Pw": encode_parabolic(replace(Pw, type=cert.Pw_type)),
        "blocks": [sorted(b) for b in data.blocks],
        "reports": [encode_report(r) for r in cert.reports],
    }
    names = ("smallest_for_i", "largest_for_ii", "unique_canonical", "exact_i", "exact_ii",
             "routes_agree", "degrees_agree")
    checks = [{"name": k, "pass": bool(getattr(cert, k)), "detail": ""} for k in names]
    return {"config": cfg.as_dict(), "record": record, "checks": checks}, EXIT_OK if cert.ok else EXIT_THEOREM


def cmd_canonical_flag(cfg: RunConfig) -> tuple[dict, int]:
    Z = gl_zip_datum(cfg.n, cfg.d, cfg.p)
    w = _parse_w(cfg, Z)
    flag = canonical_flag(Z, w)
    P, blocks = flag_stabilizer(Z, flag)
    data = canonical_data(Z, w)
    agree = P == data.Pw and tuple(blocks) == tuple(data.blocks)
    record = {"w": str(w), "representative": str(Z.z * w), "flag": encode_flag(flag),
              "agreement": agree}
    checks = [{"name": "stabilizer_equals_Pw", "pass": agree, "detail": ""}]
    if cfg.n <= EXHAUSTIVE_MAX_N:
        same = exhaustive_coarsest_flag(Z, w) == flag
        checks.append({"name": "exhaustive_oracle", "pass": same, "detail": ""})
    ok = all(c["pass"] for c in checks)
    return {"config": cfg.as_dict(), "record": record, "checks": checks}, EXIT_OK if ok else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    results = run_suite(cfg.n, cfg.d, cfg.p, cfg.budget, field_n_max=MAX_N_FIELD)
    checks = [{"name": r.name, "pass": r.passed, "detail": r.detail} for r in results]
    ok = all(r.passed for r in results)
    return {"config": cfg.as_dict(), "checks": checks}, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "strata": cmd_strata,
    "canonical-parabolic": cmd_canonical_parabolic,
    "canonical-flag": cmd_canonical_flag,
    "verify": cmd_verify,
}


# rendering

def render_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def render_csv(doc: dict) -> str:
    buf = io.StringIO()
    if "rows" in doc:
        rows = doc["rows"]
    elif "record" in doc and "reports" in doc["record"]:
        rows = [dict(r, P0_type=" ".join(map(str, r["P0_type"]))) for r in doc["record"]["reports"]]
    elif "record" in doc and "flag" in doc["record"]:
        rows = [{"position": i + 1, "member": " ".join(map(str, m))}
                for i, m in enumerate(doc["record"]["flag"]["chain"])]
    else:
        rows = doc["checks"]
    if rows:
        writer = csv.DictWriter(buf, fieldnames=sorted(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zipstrata", description="Zip strata of GL_n and their canonical parabolics.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--d", type=int, default=None)
        sp.add_argument("--p", type=int, default=2)
        sp.add_argument("--w", type=str, default=None, help='one-line notation, e.g. "3,1,2"')
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="cap on brute-force candidates for finite-field enumerations")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    cfg = RunConfig(args.command, args.n, args.d, args.p, args.format, args.budget, args.w)
    try:
        cfg.validate()
        doc, code = COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BadW as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_W
    out = render_json(doc) if cfg.fmt == "json" else render_csv(doc)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
