"""Command-line front end: ``grzh <subcommand> ...``.

Settings resolve as flag, then ``GRZH_<NAME>`` environment variable, then the
built-in default.  Exit codes: 0 success, 2 invalid parameters, 3 cap
exceeded, 4 property failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field, fields

from . import extremal as E
from . import graph as G
from . import subspace as S
from . import verify as V
from .errors import CapExceeded, ZhError
from .ring import factorize

EXIT_OK, EXIT_PARAMS, EXIT_CAP, EXIT_PROPERTY = 0, 2, 3, 4


@dataclass
class RunConfig:
    subcommand: str = ""
    h: int | None = None
    n: int | None = None
    m: int | None = None
    r: int | None = None
    k: int | None = None
    d: int | None = None
    vertex_cap: int = G.VERTEX_CAP
    enum_cap: int = G.MATERIALIZE_CAP
    seed: int = 0
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)
    samples: int = 200
    format: str = "json"
    out: str | None = None
    exact: bool = False
    family: str | None = None
    budget: int | None = None
    code_out: str | None = None
    moduli: list[int] | None = None
    suites: list[str] | None = None
    inject_fault: str | None = None

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ConfigError(f"{self.subcommand}: missing --{', --'.join(missing)}")


class ConfigError(ValueError):
    pass


_INT_FIELDS = {"h", "n", "m", "r", "k", "d", "vertex_cap", "enum_cap", "seed", "threads",
               "samples", "budget"}
_LIST_FIELDS = {"moduli": int, "suites": str}


def resolve_config(ns: argparse.Namespace, env=None) -> RunConfig:
    env = os.environ if env is None else env
    cfg = RunConfig(subcommand=ns.command)
    for f in fields(RunConfig):
        if f.name == "subcommand":
            continue
        value = getattr(ns, f.name, None)
        if value is None or value is False:
            raw = env.get(f"GRZH_{f.name.upper()}")
            if raw is not None:
                value = _parse_env(f.name, raw)
        if value is not None and value is not False:
            setattr(cfg, f.name, value)
    return cfg


def _parse_env(name: str, raw: str):
    try:
        if name in _INT_FIELDS:
            return int(raw)
        if name in _LIST_FIELDS:
            return [_LIST_FIELDS[name](x) for x in raw.replace(",", " ").split()]
        if name == "exact":
            return raw.lower() in ("1", "true", "yes")
    except ValueError as exc:
        raise ConfigError(f"bad value for GRZH_{name.upper()}: {raw!r}") from exc
    return raw


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grzh", description="Subspaces and generalized Grassmann graphs over Z_h.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, *params):
        for name in params:
            p.add_argument(f"--{name}", type=int)
        p.add_argument("--format", choices=["json", "csv"])
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--vertex-cap", dest="vertex_cap", type=int)
        p.add_argument("--enum-cap", dest="enum_cap", type=int)
        p.add_argument("--threads", type=int)
        p.add_argument("--seed", type=int)
        return p

    common(sub.add_parser("count", help="numbers of subspaces"), "h", "n", "k")
    common(sub.add_parser("enumerate", help="write every m-subspace to a family file"), "h", "n", "m")
    p = common(sub.add_parser("graph-stats", help="clique number and independence bounds"), "h", "n", "m", "r")
    p.add_argument("--exact", action="store_true", help="run the exact solvers (under the vertex cap)")
    p = common(sub.add_parser("verify", help="randomized invariant suites"))
    p.add_argument("--h", dest="moduli", type=int, action="append", help="modulus (repeatable)")
    p.add_argument("--suite", dest="suites", action="append", choices=list(V.SUITES))
    p.add_argument("--samples", type=int)
    p.add_argument("--inject-fault", dest="inject_fault", choices=list(V.SUITES),
                   help="swap in a broken implementation to check that the suite notices")
    p = common(sub.add_parser("ekr", help="intersecting-family bound and verification"), "h", "n", "m", "r")
    p.add_argument("--family", help="family file to verify")
    p = common(sub.add_parser("code", help="search for a constant-dimension code"), "h", "n", "m", "d")
    p.add_argument("--budget", type=int, help="branch-node budget for the exact solver")
    p.add_argument("--code-out", dest="code_out", help="write the code as a family file")
    return ap


# --------------------------------------------------------------------------
# commands; each returns (record, exit code)


def cmd_count(cfg: RunConfig):
    cfg.require("h", "n", "k")
    ctx, n, k = factorize(cfg.h), cfg.n, cfg.k
    if not 0 <= k <= n:
        raise ConfigError("need 0 <= k <= n")
    rec = {"schema": 1, "h": ctx.h, "n": n, "k": k,
           "subspaces": S.count_subspaces(ctx, n, k),
           "inside": {str(m): S.count_inside(ctx, k, m) for m in range(k + 1)},
           "containing": {str(m): S.count_containing(ctx, n, k, m) for m in range(k + 1)}}
    return rec, EXIT_OK


def cmd_enumerate(cfg: RunConfig):
    cfg.require("h", "n", "m")
    ctx = factorize(cfg.h)
    if not 0 <= cfg.m <= cfg.n:
        raise ConfigError("need 0 <= m <= n")
    fam = list(S.enumerate_subspaces(ctx, cfg.n, cfg.m, cap=cfg.enum_cap))
    return S.format_family(ctx, cfg.n, cfg.m, fam), EXIT_OK


def cmd_graph_stats(cfg: RunConfig):
    cfg.require("h", "n", "m", "r")
    spec = G.GraphSpec(factorize(cfg.h), cfg.n, cfg.m, cfg.r)
    bounds = E.alpha_bounds(spec, exact=False, cap=cfg.vertex_cap)
    rec = G.stats_record(spec, spec.vertex_count(), None, omega=bounds.omega)
    alpha, source = bounds.alpha_exact, bounds.alpha_exact_source
    if cfg.exact:
        if spec.vertex_count() > cfg.vertex_cap:
            raise CapExceeded(f"{spec.vertex_count()} vertices exceed the vertex cap {cfg.vertex_cap}")
        verts = G.materialize_vertices(spec)
        bits = G.adjacency_bitsets(spec, verts, cfg.vertex_cap)
        rec["edges"] = G.edge_count(bits)
        rec["connected"] = G.is_connected(bits)
        rec["omega_solver"] = G.brute_force_max_clique(spec, verts, bits, cfg.vertex_cap).size
        a = G.brute_force_max_independent_set(spec, verts, bits, cfg.vertex_cap).size
        rec["alpha_solver"] = a
        if alpha is not None and alpha != a:
            bounds.notes.append(f"solver alpha {a} disagrees with {source}")
        alpha, source = a, "exact solver"
        bounds.alpha_exact, bounds.alpha_exact_source = a, source
    rec["alpha"] = alpha
    rec["alpha_source"] = source
    rec["bounds"] = bounds.to_dict()
    ok = bounds.consistent() and rec.get("omega_solver", rec["omega"]) == rec["omega"]
    return rec, EXIT_OK if ok else EXIT_PROPERTY


def cmd_verify(cfg: RunConfig):
    moduli = cfg.moduli or list(V.DEFAULT_MODULI)
    for h in moduli:
        factorize(h)
    suites = cfg.suites or list(V.SUITES)
    rep = V.run_verify(moduli, suites, seed=cfg.seed, samples=cfg.samples,
                       threads=cfg.threads, fault=cfg.inject_fault)
    return rep, EXIT_OK if rep["all_passed"] else EXIT_PROPERTY


def cmd_ekr(cfg: RunConfig):
    cfg.require("h", "n", "m", "r")
    ctx = factorize(cfg.h)
    if cfg.family is None:
        bound = E.ekr_bound(ctx, cfg.n, cfg.m, cfg.r)
        return {"schema": 1, "params": {"h": ctx.h, "n": cfg.n, "m": cfg.m, "r": cfg.r},
                "bound": bound}, EXIT_OK
    with open(cfg.family) as fh:
        fctx, n, m, fam = S.parse_family(fh.read())
    if (fctx.h, n, m) != (ctx.h, cfg.n, cfg.m):
        raise ConfigError("family file header does not match --h/--n/--m")
    rep = E.verify_ekr(ctx, cfg.n, cfg.m, cfg.r, fam)
    bad = (not rep["r_intersecting"]) or rep["status"] == "exceeds bound"
    return rep, EXIT_PROPERTY if bad else EXIT_OK


def cmd_code(cfg: RunConfig):
    cfg.require("h", "n", "m", "d")
    ctx = factorize(cfg.h)
    res = E.search_code(ctx, cfg.n, cfg.m, cfg.d, budget=cfg.budget, cap=cfg.vertex_cap)
    if cfg.code_out:
        with open(cfg.code_out, "w") as fh:
            fh.write(S.format_family(ctx, cfg.n, cfg.m, res.code))
    ok = all(S.subspace_distance(a, b) >= cfg.d
             for i, a in enumerate(res.code) for b in res.code[i + 1:])
    cert = dict(res.certificate, verified_distance=ok)
    return cert, EXIT_OK if ok else EXIT_PROPERTY


COMMANDS = {"count": cmd_count, "enumerate": cmd_enumerate, "graph-stats": cmd_graph_stats,
            "verify": cmd_verify, "ekr": cmd_ekr, "code": cmd_code}


def render(record, fmt: str) -> str:
    if isinstance(record, str):
        return record
    if fmt == "json":
        return json.dumps(record, sort_keys=True, indent=2) + "\n"
    rows = record["results"] if "results" in record else [record]
    flat = [{k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v)
             for k, v in row.items() if k != "results"} for row in rows]
    cols = sorted({k for row in flat for k in row})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    w.writerows(flat)
    return buf.getvalue()


def main(argv=None, env=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(ns, env)
        record, code = COMMANDS[cfg.subcommand](cfg)
    except CapExceeded as exc:
        print(f"grzh: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ZhError, ValueError) as exc:
        print(f"grzh: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    text = render(record, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
