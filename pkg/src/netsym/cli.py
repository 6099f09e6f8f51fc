"""Command-line front end.

Every subcommand prints one JSON report to stdout.  Exit codes: 0 for a
completed run, 2 when the verdict is "not preparable / violated /
certified" (for scripting), 1 on errors.  ``--report-dir`` additionally
writes report.json, report.csv and the subcommand's figures.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import __version__, report as rpt
from .bounds import cluster_fidelity_bound, ghz_fidelity_bound
from .graphs import Graph, parse_graph6, format_graph6, triangle_decomposition
from .network import Inflation, Network, custom_inflation, equal_marginals, separable_cut, standard_inflations
from .nogo import observation1_scan
from .pauli import parse as parse_pauli
from .states import DenseState, ghz, graph_state, white_noise
from .symmetry import observation2_verdict
from .witness import (
    cluster_square_witness,
    evaluate,
    ghz_triangle_witness,
    link_certification,
    link_certification_search,
    theorem3_witness,
    tripartite_demo_witnesses,
    white_noise_threshold,
)

EXIT_OK, EXIT_ERROR, EXIT_VERDICT = 0, 1, 2


class CliError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON in {path}: {exc}") from exc


def _load_graph(args) -> Graph:
    if getattr(args, "graph6", None):
        return parse_graph6(args.graph6)
    if getattr(args, "graph_json", None):
        return Graph.from_json_dict(_load_json(args.graph_json))
    raise CliError("need --graph6 or --graph-json")


def _load_state(path: str) -> DenseState:
    return DenseState.from_json_dict(_load_json(path))


def _digest(args: argparse.Namespace) -> str:
    """Digest of the effective inputs: flag values, with file arguments
    replaced by their content hash so the digest is path-independent."""
    h = hashlib.sha256()
    payload = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    for key in ("state_json", "graph_json", "network_json", "wiring_json"):
        path = payload.get(key)
        if path and os.path.exists(path):
            with open(path, "rb") as fh:
                payload[key] = hashlib.sha256(fh.read()).hexdigest()
    h.update(json.dumps(payload, sort_keys=True, default=str).encode())
    return h.hexdigest()[:16]


# -- subcommands --------------------------------------------------------------

def _cmd_nogo(args):
    g = _load_graph(args)
    res = observation1_scan(g, orbit_cap=args.orbit_cap)
    figures = {}
    if res.certificate is None:
        results = {
            "certificate": None,
            "explored": res.explored,
            "exhausted": res.exhausted,
        }
        exit_code = EXIT_OK
    else:
        cert = res.certificate
        results = {
            "certificate": cert.to_json_dict(),
            "explored": res.explored,
            "exhausted": False,
            "graph6": format_graph6(g),
        }
        figures["nogo_input"] = rpt.graph_figure(g, title="input graph")
        figures["nogo_witness_graph"] = rpt.graph_figure(
            cert.witness_graph, highlight=cert.triangle,
            title=f"after LC {list(cert.witness_lc_sequence)}; triangle {list(cert.triangle)}",
        )
        exit_code = EXIT_VERDICT
    return results, figures, exit_code


def _witness_for(args):
    kind = args.kind
    if kind == "ghz":
        w = ghz_triangle_witness()
        pure = ghz(3)
    elif kind == "cluster":
        w = cluster_square_witness(args.variant)
        ring = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        pure = graph_state(ring)
    elif kind == "theorem3":
        g = _load_graph(args)
        scan = observation1_scan(g, orbit_cap=args.orbit_cap)
        if scan.certificate is None:
            raise CliError("no triangle condition found for this graph")
        w = scan.certificate.witness
        pure = graph_state(scan.certificate.witness_graph)
    else:
        raise CliError(f"unknown witness kind {kind!r}")
    return w, pure


def _cmd_witness(args):
    if args.kind == "tripartite":
        reports, figures = [], {}
        demo_states = _tripartite_demo_states()
        for w, pure in zip(tripartite_demo_witnesses(), demo_states):
            state = _pick_state(args, pure)
            rep = evaluate(w, state)
            reports.append(rep.to_json_dict())
            figures[f"witness_{w.name}"] = rpt.witness_figure(rep.to_json_dict())
        results = {"reports": reports}
        code = EXIT_VERDICT if any(r["violated"] for r in reports) else EXIT_OK
        return results, figures, code
    w, pure = _witness_for(args)
    state = _pick_state(args, pure)
    rep = evaluate(w, state)
    results = {"witness": w.to_json_dict() if args.full_witness else w.name, "report": rep.to_json_dict()}
    figures = {"witness": rpt.witness_figure(rep.to_json_dict())}
    return results, figures, EXIT_VERDICT if rep.violated else EXIT_OK


def _tripartite_demo_states():
    k4 = Graph.from_edges(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    hexes = Graph.from_edges(
        6, [(0, v) for v in (1, 2, 4, 5)] + [(3, v) for v in (1, 2, 4, 5)]
    )
    return [graph_state(k4), graph_state(hexes)]


def _pick_state(args, pure: DenseState) -> DenseState:
    if getattr(args, "state_json", None):
        return _load_state(args.state_json)
    if args.noise is not None:
        return white_noise(pure, args.noise)
    return pure


def _cmd_threshold(args):
    w, pure = _witness_for(args)
    res = white_noise_threshold(w, pure)
    ps = np.linspace(0, 1, 101)
    lhs = np.array([evaluate(w, white_noise(pure, float(p))).lhs for p in ps])
    figures = {
        "threshold": rpt.threshold_figure(ps, lhs, res.threshold if res.found else None)
    }
    results = {
        "witness": w.name,
        "threshold": res.threshold,
        "found": res.found,
        "lhs_at_pure": res.lhs_at_one,
    }
    return results, figures, EXIT_OK


def _cmd_linkcert(args):
    s = _load_state(args.state_json)
    a, c = (int(x) for x in args.link.split(","))
    if args.search:
        partition = None
        if args.partition:
            partition = [
                [int(x) for x in part.split(",") if x] for part in args.partition.split("|")
            ]
        rep = link_certification_search(s, a, c, partition)
    else:
        paulis = tuple(parse_pauli(t) for t in (args.p1, args.p2, args.p3))
        rep = link_certification(s, a, c, paulis)
    results = {"report": rep.to_json_dict(), "certified": rep.violated}
    figures = {"linkcert": rpt.witness_figure(rep.to_json_dict())}
    return results, figures, EXIT_VERDICT if rep.violated else EXIT_OK


def _cmd_symmetry(args):
    s = _load_state(args.state_json)
    cap = args.arity_cap if args.arity_cap is not None else s.num_parties - 1
    verdict = observation2_verdict(s, cap)
    from .states import partial_transpose_min_eig
    from itertools import combinations

    labels, eigs = [], []
    n = s.num_parties
    for size in range(1, n // 2 + 1):
        for subset in combinations(range(n), size):
            if size == n / 2 and subset[0] != 0:
                continue
            labels.append("".join(str(q) for q in subset))
            eigs.append(partial_transpose_min_eig(s, subset))
    figures = {"symmetry": rpt.spectrum_figure(labels, eigs)}
    results = {"verdict": verdict.to_json_dict(), "arity_cap": cap}
    code = EXIT_VERDICT if verdict.verdict == "network-infeasible" else EXIT_OK
    return results, figures, code


def _cmd_bound(args):
    if args.target == "ghz":
        res = ghz_fidelity_bound(args.method, singles_zero=args.singles_zero)
        results = {"bound": res.to_json_dict()}
        from .bounds import _feasible  # feasibility margin curve for the figure

        fs = np.linspace(max(0.0, res.bound - 0.15), min(1.0, res.bound + 0.15), 31)
        margins = np.array(
            [1.0 if _feasible(float(F), args.method, args.singles_zero, 0.2) else -1.0 for F in fs]
        )
        figures = {
            "bound_ghz": rpt.bound_curve_figure(fs, margins, res.bound, f"ghz {args.method}")
        }
    else:
        res = cluster_fidelity_bound()
        results = {"bound": res.to_json_dict()}
        from .bounds import _cluster_value, _CLUSTER_CONSTRAINTS

        las = np.linspace(0, 1, 61)
        vals = np.array([_cluster_value(float(la), float(la), _CLUSTER_CONSTRAINTS)[0] for la in las])
        figures = {
            "bound_cluster": rpt.bound_curve_figure(
                las, vals - res.bound, res.variables.lam, "cluster bound profile"
            )
        }
    return results, figures, EXIT_OK


def _cmd_inflate(args):
    base = Network.from_json_dict(_load_json(args.network_json))
    if args.kind in ("tau", "gamma"):
        infl = standard_inflations(base, args.kind, swap_source=args.swap_source)
    else:
        wiring_doc = _load_json(args.wiring_json)
        infl = Inflation.from_json_dict(
            {"network": base.to_json_dict(), "copies": wiring_doc["copies"], "wiring": wiring_doc["wiring"]}
        )
    results = {"inflation": infl.to_json_dict()}
    if args.marginals:
        results["equal_marginals"] = [
            {"node_copies": [[n, c] for n, c in mc.node_copies], "base_nodes": list(mc.base_nodes)}
            for mc in equal_marginals(infl)
        ]
    cut = separable_cut(infl)
    results["separable_cut"] = None if cut is None else [[[n, c] for n, c in side] for side in cut]
    figures = {
        "inflation": rpt.inflation_figure(infl.registers(), infl.wiring, title=f"{args.kind} inflation")
    }
    return results, figures, EXIT_OK


# -- dispatch ------------------------------------------------------------------

def _add_globals(parser: argparse.ArgumentParser) -> None:
    # SUPPRESS keeps a pre-subcommand value from being overwritten
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed echoed into the report; NETSYM_SEED overrides")
    parser.add_argument("--json", metavar="OUT", default=argparse.SUPPRESS,
                        help="also write the report to this file")
    parser.add_argument("--report-dir", default=argparse.SUPPRESS,
                        help="write report.json/report.csv and figures here")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="netsym", description=__doc__)
    _add_globals(p)
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("nogo", help="scan a graph state for a bipartite-source no-go certificate")
    q.add_argument("--graph6")
    q.add_argument("--graph-json")
    q.add_argument("--orbit-cap", type=int, default=100_000)
    _add_globals(q)
    q.set_defaults(func=_cmd_nogo)

    q = sub.add_parser("witness", help="evaluate a named witness")
    q.add_argument("kind", choices=["ghz", "cluster", "theorem3", "tripartite"])
    q.add_argument("--noise", type=float, default=None)
    q.add_argument("--state-json")
    q.add_argument("--graph6")
    q.add_argument("--graph-json")
    q.add_argument("--variant", choices=["xi", "tau"], default="xi")
    q.add_argument("--orbit-cap", type=int, default=100_000)
    q.add_argument("--full-witness", action="store_true", help="embed proof data in the report")
    _add_globals(q)
    q.set_defaults(func=_cmd_witness)

    q = sub.add_parser("threshold", help="white-noise threshold of a named witness")
    q.add_argument("kind", choices=["ghz", "cluster", "theorem3"])
    q.add_argument("--graph6")
    q.add_argument("--graph-json")
    q.add_argument("--variant", choices=["xi", "tau"], default="xi")
    q.add_argument("--orbit-cap", type=int, default=100_000)
    _add_globals(q)
    q.set_defaults(func=_cmd_threshold)

    q = sub.add_parser("linkcert", help="certify a network link from state data")
    q.add_argument("--state-json", required=True)
    q.add_argument("--link", required=True, metavar="A,C")
    q.add_argument("--p1", default=None, help="Pauli text for the X-term companion")
    q.add_argument("--p2", default=None)
    q.add_argument("--p3", default=None)
    q.add_argument("--search", action="store_true", help="optimize the companion observables")
    q.add_argument("--partition", default=None, metavar="R1|R2|R3", help='e.g. "1|3|" with --search')
    _add_globals(q)
    q.set_defaults(func=_cmd_linkcert)

    q = sub.add_parser("symmetry", help="permutation-symmetry network verdict")
    q.add_argument("--state-json", required=True)
    q.add_argument("--arity-cap", type=int, default=None)
    _add_globals(q)
    q.set_defaults(func=_cmd_symmetry)

    q = sub.add_parser("bound", help="fidelity bounds for network states")
    q.add_argument("target", choices=["ghz", "cluster"])
    q.add_argument("--method", choices=["cm_only", "cm_extra", "gisin_extra"], default="cm_only")
    q.add_argument("--singles-zero", action="store_true")
    _add_globals(q)
    q.set_defaults(func=_cmd_bound)

    q = sub.add_parser("inflate", help="build inflations and list equal marginals")
    q.add_argument("kind", choices=["tau", "gamma", "custom"])
    q.add_argument("--network-json", required=True)
    q.add_argument("--wiring-json", help="custom wiring document (copies + wiring)")
    q.add_argument("--swap-source", default=None)
    q.add_argument("--marginals", action="store_true")
    _add_globals(q)
    q.set_defaults(func=_cmd_inflate)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = getattr(args, "seed", None)
    json_out = getattr(args, "json", None)
    report_dir = getattr(args, "report_dir", None)
    env_seed = os.environ.get("NETSYM_SEED")
    if env_seed is not None:
        seed = int(env_seed)
    started = time.perf_counter()
    try:
        if args.command == "witness" and args.kind != "tripartite" and args.noise is not None:
            if not 0.0 <= args.noise <= 1.0:
                raise CliError(f"--noise {args.noise} outside [0,1]")
        results, figures, code = args.func(args)
    except CliError as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True))
        return EXIT_ERROR
    except Exception as exc:  # surface library errors as clean reports
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}"}, sort_keys=True))
        return EXIT_ERROR
    report = {
        "command": argv,
        "inputs_digest": _digest(args),
        "version": __version__,
        "seed": seed,
        "results": results,
        "timing_ms": round((time.perf_counter() - started) * 1000.0, 3),
    }
    text = rpt.report_json(report)
    print(text)
    if json_out:
        with open(json_out, "w") as fh:
            fh.write(text + "\n")
    if report_dir:
        rpt.save_report(report, report_dir, figures)
    else:
        import matplotlib.pyplot as plt

        for fig in figures.values():
            plt.close(fig)
    return code


if __name__ == "__main__":
    sys.exit(main())
