"""Command-line front end.

Every subcommand reads one UTF-8 JSON file (a lattice, a generated module,
a simplicial complex, or a saved resolution), computes, and writes a single
report to stdout.  Exit status: 0 success, 1 verification failure or an
uncertified search, 2 invalid input.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass

from . import io
from .descent import descend, minimal_generators, verify
from .forestry import (
    ForestryError,
    default_community,
    forest_invariants,
    shrubberies,
    stake_sets,
)
from .koszul import SearchConfig, betti_support, betti_vector, koszul_complex
from .lattice import LatticeError, NotCoArtinianError, count_paths, quotient, saturated_paths
from .linalg import parse_field
from .resolution import MODES, ResolutionError, ResolveConfig, check_equivariance, resolve_equivariant
from .simplicial import ComplexError



class InputError(ValueError):
    pass


@dataclass(frozen=True)
class JobConfig:
    command: str
    input: str | None
    field: object
    bound: int | None
    radius_cap: int | None
    mode: str
    seed: int
    jobs: int
    format: str

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "JobConfig":
        try:
            F = parse_field(ns.field)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        for name in ("bound", "radius_cap"):
            v = getattr(ns, name)
            if v is not None and v < 0:
                raise InputError(f"--{name.replace('_', '-')} must be nonnegative")
        if ns.jobs < 1:
            raise InputError("--jobs must be at least 1")
        if not 0 <= ns.seed < 1 << 64:
            raise InputError("--seed must fit in an unsigned 64-bit integer")
        return cls(ns.command, getattr(ns, "input", None), F, ns.bound, ns.radius_cap, ns.mode,
                   ns.seed, ns.jobs, ns.format)

    @property
    def search(self) -> SearchConfig:
        return SearchConfig(radius_cap=self.radius_cap, jobs=self.jobs)

    @property
    def resolve_config(self) -> ResolveConfig:
        return ResolveConfig(self.mode, self.search, self.jobs)


def _vector(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="q (rationals) or fp:<p>")
    common.add_argument("--bound", type=int, default=None, help="degree bound for exactness checks")
    common.add_argument("--radius-cap", type=int, default=None, help="cap for the Betti support search")
    common.add_argument("--mode", choices=MODES, default="canonical-basis")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("text", "json"), default="json")

    p = argparse.ArgumentParser(prog="latres", description="Minimal free resolutions of lattice ideals.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_, with_input=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if with_input:
            sp.add_argument("input", help="JSON input file")
        return sp

    add("lattice", "certify a lattice, print its grading and quotient group")
    sp = add("koszul", "Koszul simplicial complex of a module at a degree")
    sp.add_argument("--degree", type=_vector, required=True)
    add("betti", "multigraded Betti numbers, one entry per coset")
    sp = add("forest", "shrubberies, stake sets and forest invariants")
    sp.add_argument("--degree", type=_vector, default=None, help="for a module input: the degree of K^b")
    sp = add("primes", "primes where the field fails to be torsionless")
    sp = add("paths", "saturated decreasing lattice paths from UPPER down to LOWER", with_input=False)
    sp.add_argument("lower", type=_vector)
    sp.add_argument("upper", type=_vector)
    sp.add_argument("--list", action="store_true", help="enumerate the paths")
    add("resolve", "equivariant minimal free resolution")
    add("descend", "resolution of the lattice ideal graded by the quotient group")
    sp = add("verify", "full certification report")
    sp.add_argument("--samples", type=int, default=100, help="equivariance samples")
    return p


# --------------------------------------------------------------------------
# Loading
# --------------------------------------------------------------------------


def _read(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return io.loads(text)


def _module(obj):
    if io.input_kind(obj) == "complex":
        raise InputError("expected a lattice or a generated module, got a simplicial complex")
    return io.module_from_json(obj)


def _resolution(cfg: JobConfig, obj):
    if isinstance(obj, dict) and obj.get("type") == "equivariant-resolution":
        return io.resolution_from_json(obj)
    return resolve_equivariant(_module(obj), cfg.field, cfg.resolve_config)


# --------------------------------------------------------------------------
# Commands; each returns (exit code, json payload, text lines)
# --------------------------------------------------------------------------


def cmd_lattice(cfg, obj):
    L = io.lattice_from_json(obj)
    Q = quotient(L)
    data = {"lattice": io.lattice_to_json(L),
            "quotient": {"free_rank": Q.free_rank, "torsion": list(Q.torsion_factors)}}
    text = [f"n = {L.n}, rank {len(L.basis)}",
            f"grading d = {list(L.grading)}",
            "quotient Z^{} / L = {}".format(L.n, _group(Q))]
    return 0, data, text


def _group(Q) -> str:
    parts = ([f"Z^{Q.free_rank}"] if Q.free_rank else []) + [f"Z/{f}" for f in Q.torsion_factors]
    return " + ".join(parts) or "0"


def cmd_koszul(cfg, obj, degree):
    M = _module(obj)
    if len(degree) != M.n:
        raise InputError(f"--degree needs {M.n} entries")
    K = koszul_complex(M, degree)
    bv = betti_vector(K, M.n, cfg.field)
    data = {"degree": list(degree), "complex": io.complex_to_json(K), "betti": list(bv)}
    if K.is_void:
        text = [f"K^{list(degree)} is void"]
    else:
        text = [f"K^{list(degree)} facets: {[list(f) for f in K.facets]}"]
    text.append(f"betti numbers by homological degree: {list(bv)}")
    return 0, data, text


def cmd_betti(cfg, obj):
    M = _module(obj)
    S = betti_support(M, cfg.field, cfg.search)
    data = {"certified": S.certified, "radius": S.radius,
            "ranks": [S.ranks().get(i, 0) for i in range(max(S.ranks(), default=-1) + 1)],
            "entries": [{"i": e.i, "coset": list(e.coset), "lift": list(e.lift), "rank": e.rank} for e in S.entries]}
    text = [f"i={e.i} lift={list(e.lift)} coset={list(e.coset)} rank={e.rank}" for e in S.entries]
    text.append(f"total ranks: {data['ranks']}")
    if not S.certified:
        text.append("UNCERTIFIED: radius cap reached before the search stabilised")
    return (0 if S.certified else 1), data, text


def _faces(fs):
    return [list(f) for f in fs]


def cmd_forest(cfg, obj, degree):
    if io.input_kind(obj) == "complex":
        K = io.complex_from_json(obj)
    else:
        if degree is None:
            raise InputError("--degree is required for a module input")
        M = io.module_from_json(obj)
        if len(degree) != M.n:
            raise InputError(f"--degree needs {M.n} entries")
        K = koszul_complex(M, degree)
    inv = forest_invariants(K)
    dims = []
    text = []
    if not K.is_void:
        comm = default_community(K)
        for i in range(0, K.dim + 1):
            T = shrubberies(K, i, cfg.field)
            S = stake_sets(K, i, cfg.field)
            dims.append({"i": i, "shrubberies": [_faces(t) for t in T], "stake_sets": [_faces(s) for s in S],
                         "tau": inv.tau[i], "sigma": inv.sigma[i]})
            text.append(f"i={i}: {len(T)} shrubberies, {len(S)} stake sets, tau={inv.tau[i]}, sigma={inv.sigma[i]}")
        hedges = [{"i": h.i, "stakes": _faces(h.stakes), "shrubs": _faces(h.shrubs)} for h in comm.hedges]
    else:
        hedges = []
    torsion = {str(i): v for i, v in sorted(inv.torsion.items())}
    data = {"complex": io.complex_to_json(K), "dimensions": dims, "torsion": torsion,
            "community": hedges, "bad_primes": sorted(inv.bad_primes)}
    text.append(f"torsion orders: {torsion}")
    text.append(f"bad primes: {sorted(inv.bad_primes)}")
    return 0, data, text


def cmd_primes(cfg, obj):
    if io.input_kind(obj) == "complex":
        complexes = [io.complex_from_json(obj)]
        certified = True
    else:
        M = io.module_from_json(obj)
        S = betti_support(M, cfg.field, cfg.search)
        certified = S.certified
        complexes = [koszul_complex(M, e.lift) for e in S.entries]
    primes: dict = {}
    seen = set()
    for K in complexes:
        if K in seen or K.is_void:
            continue
        seen.add(K)
        for p, why in forest_invariants(K).provenance().items():
            primes.setdefault(p, [])
            for item in why:
                if item not in primes[p]:
                    primes[p].append(item)
    data = {"primes": [{"prime": p, "provenance": [{"quantity": q, "i": i, "value": v} for q, i, v in why]}
                       for p, why in sorted(primes.items())],
            "certified": certified}
    text = [f"{p}: " + ", ".join(f"{q}_{i} = {v}" for q, i, v in why) for p, why in sorted(primes.items())]
    if not primes:
        text.append("no bad primes")
    if not certified:
        text.append("UNCERTIFIED: radius cap reached before the search stabilised")
    return (0 if certified else 1), data, text


def cmd_paths(cfg, lower, upper, listing):
    if len(lower) != len(upper):
        raise InputError("endpoints have different lengths")
    try:
        total = count_paths(lower, upper)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    data = {"lower": list(lower), "upper": list(upper), "count": total}
    text = [f"{total} saturated paths from {list(upper)} down to {list(lower)}"]
    if listing:
        paths = [[j + 1 for j in p.steps] for p in saturated_paths(lower, upper)]
        data["paths"] = paths
        text += [" ".join(f"x{j}" for j in p) for p in paths]
    return 0, data, text


def cmd_resolve(cfg, obj):
    res = _resolution(cfg, obj)
    desc = descend(res)
    data = {"resolution": io.resolution_to_json(res),
            "rendered": [desc.rendered(i) for i in range(1, len(desc.matrices))],
            "ranks": list(res.ranks())}
    text = [f"ranks: {list(res.ranks())}"]
    for i in range(1, len(desc.matrices)):
        text.append(f"d_{i}:")
        text += ["  [" + ", ".join(row) + "]" for row in desc.rendered(i)]
    if not res.certified:
        text.append("UNCERTIFIED: radius cap reached before the search stabilised")
    return (0 if res.certified else 1), data, text


def cmd_descend(cfg, obj):
    res = _resolution(cfg, obj)
    desc = descend(res)
    gens = minimal_generators(desc)
    data = {"descended": io.descended_to_json(desc, rendered=True),
            "generators": [g.render(desc.field) for g in gens]}
    text = [f"ranks: {list(desc.ranks())}", "generators:"] + [f"  {g.render(desc.field)}" for g in gens]
    if not res.certified:
        text.append("UNCERTIFIED: radius cap reached before the search stabilised")
    return (0 if res.certified else 1), data, text


def cmd_verify(cfg, obj, samples):
    res = _resolution(cfg, obj)
    desc = descend(res)
    report = verify(desc, cfg.bound)
    eq = check_equivariance(res, samples, cfg.seed)
    passed = report.passed and eq.passed
    data = {"report": io.report_to_json(report),
            "equivariance": {"passed": eq.passed, "checks": eq.checks,
                             "witnesses": io._jsonable(eq.witnesses[:5])},
            "passed": passed}
    text = report.lines() + [f"equivariance: {eq}", "PASS" if passed else "FAIL"]
    return (0 if passed else 1), data, text


# --------------------------------------------------------------------------


def _dispatch(cfg: JobConfig, ns):
    if cfg.command == "paths":
        return cmd_paths(cfg, ns.lower, ns.upper, ns.list)
    obj = _read(cfg.input)
    if cfg.command == "lattice":
        return cmd_lattice(cfg, obj)
    if cfg.command == "koszul":
        return cmd_koszul(cfg, obj, ns.degree)
    if cfg.command == "betti":
        return cmd_betti(cfg, obj)
    if cfg.command == "forest":
        return cmd_forest(cfg, obj, ns.degree)
    if cfg.command == "primes":
        return cmd_primes(cfg, obj)
    if cfg.command == "resolve":
        return cmd_resolve(cfg, obj)
    if cfg.command == "descend":
        return cmd_descend(cfg, obj)
    if cfg.command == "verify":
        return cmd_verify(cfg, obj, ns.samples)
    raise InputError(f"unknown command {cfg.command}")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = JobConfig.from_args(ns)
        code, data, text = _dispatch(cfg, ns)
    except NotCoArtinianError as exc:
        print(f"error: {exc}", file=stderr)
        print(f"witness: {list(exc.witness)}", file=stderr)
        return 2
    except (InputError, io.SchemaError, LatticeError, ComplexError, ForestryError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except ResolutionError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    if cfg.format == "json":
        stdout.write(io.dumps(data, pretty=True) + "\n")
    else:
        stdout.write("\n".join(text) + "\n")
    return code


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    sys.exit(run())
