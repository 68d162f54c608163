"""Command-line entry point: ``mixtile <command> ...``.

Every command prints a JSON report (``"schema": 1``) and exits with 0 on
pass/found, 1 on refuted/not-found, 2 on input errors and 3 when a budget
or cap was hit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import CappedError, MixtileError, ParseError, PreconditionError, UndecidedError

SCHEMA = 1
EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def rational(text: str) -> Fraction:
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc
    return value


class _Input:
    """Reads input files once and remembers their digests for the report."""

    def __init__(self):
        self.digests: dict[str, str] = {}

    def read(self, path: str) -> str:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise PreconditionError(f"cannot read {path}: {exc.strerror}") from exc
        self.digests[path] = hashlib.sha256(data).hexdigest()
        return data.decode("utf-8")


def _cmd_analyze(args, inp: _Input) -> tuple[dict, int]:
    from .cliques import clique_hypergraph, decompose, linkage_table
    from .graph import parse_graph
    g = parse_graph(inp.read(args.graph))
    j = clique_hypergraph(g, args.k)
    dec = decompose(j)
    table = linkage_table(j)
    res = {
        "vertices": g.n, "edges": g.m, "cliques": len(j.edges),
        "tight": len(dec.tight), "loose": len(dec.loose),
        "reachClasses": [len(r) for r in dec.reach],
        "decomposition": dec.to_dict(),
        "linked": {str(v): ([list(e) for e in w] if w else None) for v, w in sorted(table.items())},
        "unlinked": [v for v, w in sorted(table.items()) if w is None],
    }
    return res, EXIT_OK


def _cmd_crit(args, inp: _Input) -> tuple[dict, int]:
    from .graph import guest_profile, is_fcr, parse_guest
    h = parse_guest(inp.read(args.guest))
    prof = guest_profile(h)
    fcr = [is_fcr(t) if t.n else False for t in h.tiles]
    res = {"profile": prof.to_dict(), "fcr": all(fcr), "tileFcr": fcr}
    return res, EXIT_OK


def _cmd_certify(args, inp: _Input) -> tuple[dict, int]:
    from . import certifier
    from .graph import parse_graph
    g = parse_graph(inp.read(args.graph))
    rep = certifier.check_framework(g, args.chi, args.rho, args.t, args.l)
    res: dict = {"framework": rep.to_dict()}
    ok = rep.ok
    if args.robust is not None:
        v = certifier.check_robust(g, args.robust, args.chi, args.rho, args.t, args.l, seed=args.seed,
                                   edge_slack=args.edge_slack)
        res["robust"] = v.to_dict()
        ok = ok and v.ok
    if args.degree is not None:
        v = certifier.check_degree_framework(g, args.chi, args.degree, args.rho)
        res["degree"] = v.to_dict()
        ok = ok and v.status == "PASS"
    if args.degseq is not None:
        strong = certifier.check_strong_degree_sequence(g, args.chi, args.degseq)
        res["degreeSequence"] = {"strong": strong}
        ok = ok and strong
    if args.density is not None:
        rho_d, d, mu = args.density
        v = certifier.check_uniform_density(g, rho_d, d, mu, seed=args.seed)
        res["density"] = v.to_dict()
        ok = ok and v.ok
    res["ok"] = ok
    return res, EXIT_OK if ok else EXIT_NO


def _cmd_embed(args, inp: _Input) -> tuple[dict, int]:
    from .allocation import BlowupHost, allocate_to_blowup
    from .graph import parse_graph, parse_guest
    from .oracles import EmbeddingWitness
    h = parse_guest(inp.read(args.guest))
    r = parse_graph(inp.read(args.reduced))
    host = BlowupHost.uniform(r, args.m)
    emb = allocate_to_blowup(h, host, args.chi, args.rho, seed=args.seed)
    problems = EmbeddingWitness(emb.vertex_map).problems(h, host.graph())
    assert not problems, f"embedding failed independent validation: {problems[:3]}"
    res = {"embedded": True, "guestOrder": h.n, "hostOrder": sum(host.cluster_sizes), **emb.to_dict()}
    return res, EXIT_OK


def _cmd_flexi(args, inp: _Input) -> tuple[dict, int]:
    from .flexi import FlexiCertificate, certify_flexi
    from .graph import parse_guest
    h = parse_guest(inp.read(args.guest))
    out = certify_flexi(h, args.kind, args.k, args.s, args.p, budget=args.budget or 10_000_000)
    if isinstance(out, FlexiCertificate):
        problems = out.problems()
        assert not problems, f"certificate failed independent validation: {problems[:3]}"
        return {"certified": True, "certificate": out.to_dict(elide=args.elide)}, EXIT_OK
    return {"certified": False, "refutation": out.to_dict()}, EXIT_NO


def _run_one_suite(job: tuple[str, int, int]) -> dict:
    from .testkit import run_suite
    name, seed, budget = job
    return run_suite(name, seed=seed, budget=budget).to_dict()


def _cmd_suite(args, inp: _Input) -> tuple[dict, int]:
    from .testkit import SUITES
    names = sorted(SUITES) if args.names == ["all"] else args.names
    for name in names:
        if name not in SUITES:
            raise PreconditionError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
    # per-suite seeds are fixed by position, so the merge is deterministic
    jobs = [(name, args.seed + i, args.budget or 100) for i, name in enumerate(names)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_run_one_suite, jobs))
    else:
        results = [_run_one_suite(j) for j in jobs]
    ok = all(r["failed"] == 0 for r in results)
    return {"suites": results, "ok": ok}, EXIT_OK if ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="also write the report to PATH")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None)
    common.add_argument("--jobs", type=int, default=1)

    parser = argparse.ArgumentParser(prog="mixtile", description="Mixed tilings: analysis and certificates.")
    parser.add_argument("--version", action="version", version=f"mixtile {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="clique hypergraph components and linkage")
    p.add_argument("graph")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("crit", parents=[common], help="chromatic profile of a tiled guest")
    p.add_argument("guest")
    p.set_defaults(func=_cmd_crit)

    p = sub.add_parser("certify", parents=[common], help="tiling framework conditions for a host")
    p.add_argument("graph")
    p.add_argument("--chi", type=rational, required=True)
    p.add_argument("--rho", type=rational, default=Fraction(0))
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--robust", type=rational, metavar="MU")
    p.add_argument("--edge-slack", type=rational, metavar="D")
    p.add_argument("--degree", type=rational, metavar="MU")
    p.add_argument("--degseq", type=rational, metavar="MU")
    p.add_argument("--density", type=rational, nargs=3, metavar=("RHO", "D", "MU"))
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("embed", parents=[common], help="embed a guest into a blown-up bottle tiling")
    p.add_argument("guest")
    p.add_argument("reduced")
    p.add_argument("--m", type=int, required=True, help="cluster size")
    p.add_argument("--chi", type=rational, required=True)
    p.add_argument("--rho", type=rational, default=Fraction(0))
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("flexi", parents=[common], help="certify or refute flexibility of colour classes")
    p.add_argument("guest")
    p.add_argument("--kind", choices=["proper", "topological"], default="proper")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--elide", action="store_true", help="omit the witness table")
    p.set_defaults(func=_cmd_flexi)

    p = sub.add_parser("suite", parents=[common], help="invariant suites")
    p.add_argument("action", choices=["run"])
    p.add_argument("names", nargs="+", help="suite names, or 'all'")
    p.set_defaults(func=_cmd_suite)
    return parser


def _params(args) -> dict:
    skip = {"func", "json", "command"}
    out = {}
    for key, val in sorted(vars(args).items()):
        if key in skip:
            continue
        if isinstance(val, Fraction):
            val = str(val)
        elif isinstance(val, list):
            val = [str(v) if isinstance(v, Fraction) else v for v in val]
        out[key] = val
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    inp = _Input()
    start = time.perf_counter()
    report: dict = {"schema": SCHEMA, "command": args.command, "seed": args.seed}
    try:
        results, code = args.func(args, inp)
        report["results"] = results
    except (ParseError, PreconditionError) as exc:
        report["error"] = exc.to_dict()
        code = EXIT_INPUT
    except (UndecidedError, CappedError) as exc:
        report["error"] = exc.to_dict()
        code = EXIT_BUDGET
    except MixtileError as exc:
        report["error"] = exc.to_dict()
        code = EXIT_NO
    report["inputs"] = dict(sorted(inp.digests.items()))
    report["parameters"] = _params(args)
    report["timing"] = {"seconds": round(time.perf_counter() - start, 4)}
    report["exitCode"] = code
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.json:
        Path(args.json).write_text(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
