"""Command-line entry point: one subcommand per pipeline stage.

Exit codes: 0 on success, 1 on a domain error (message on stderr), 2 on usage
errors. Every subcommand takes ``--seed`` (default 0) and all randomness flows
from it through the documented stream-splitting rule, so reruns are
byte-reproducible.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .alignment import (
    AnchorSet,
    align_by_hyperedge_ids,
    align_exact,
    align_wl_anchored,
    format_alignment,
    fuse_datasets,
    parse_anchor_file,
    parse_edge_pairs,
    parse_node_mapping,
)
from .bounds import BoundsInput, lemma_rr_bounds, lower_bound_risk, mm_sample_bounds
from .core import Hyperedge, load_hypergraph, save_hypergraph
from .errors import HgrecError
from .generators import GeneratorSpec
from .kgeval import (
    EndpointConfig,
    SubgraphSpec,
    chat_completion,
    eval_csv_row,
    evaluate_response,
    extract_subgraph,
    ingest_edge_list,
    render_prompt,
    replay_completion,
)
from .oracle import TabularOracle, train_tabular
from .recovery import ALL_PAIRS, recover_from_dataset, recover_from_oracle, recovery_report
from .sampling import Dataset, MMDataset, make_masking_strategy, sample_dataset, sample_mm_dataset
from .sweep import SweepConfig, fit_scaling, load_csv, run_sweep, save_csv


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _cmd_gen(args) -> int:
    spec = GeneratorSpec(
        structure=args.structure,
        n=args.n,
        p=args.p,
        w_min=args.w_min,
        w_max=args.w_max,
        seed=args.seed,
    )
    save_hypergraph(spec.build(), args.output)
    return 0


def _cmd_sample(args) -> int:
    h = load_hypergraph(args.hypergraph)
    sample_dataset(h, args.n_samples, args.seed).save(args.output)
    return 0


def _cmd_mm_sample(args) -> int:
    h = load_hypergraph(args.hypergraph)
    strategy = make_masking_strategy(args.mask)
    sample_mm_dataset(h, args.n_samples, args.k_inner, strategy, args.seed).save(args.output)
    return 0


def _cmd_train(args) -> int:
    mm = MMDataset.load(args.mm_data)
    train_tabular(mm).save(args.output)
    return 0


def _cmd_recover(args) -> int:
    from .oracle import ExactOracle

    strategy = make_masking_strategy(args.mask)
    if args.oracle:
        oracle = TabularOracle.load(args.oracle)
    else:
        oracle = ExactOracle(load_hypergraph(args.exact_from), strategy)
    if args.candidates == "pairs":
        candidates = ALL_PAIRS
    else:
        lines = Path(args.candidates).read_text(encoding="utf-8").split("\n")
        candidates = [Hyperedge(l.split()) for l in lines if l.strip()]
    recovered, connected = recover_from_oracle(
        oracle, candidates, strategy, ratio_aggregation=args.aggregation
    )
    save_hypergraph(recovered, args.output)
    print(f"meta_connected: {'true' if connected else 'false'}")
    return 0


def _cmd_report(args) -> int:
    truth = load_hypergraph(args.truth)
    rec = load_hypergraph(args.rec)
    relabeling = None
    if args.relabel:
        relabeling = parse_node_mapping(Path(args.relabel).read_text(encoding="utf-8"))
    report = recovery_report(rec, truth, relabeling, meta_connected=not args.disconnected)
    _write(args.output, report.to_json())
    return 0


def _cmd_align(args) -> int:
    h1 = load_hypergraph(args.h1)
    h2 = load_hypergraph(args.h2)
    if args.method == "exact":
        alignment = align_exact(h1, h2, max_nodes=args.max_nodes)
    elif args.method == "ids":
        pairs = parse_edge_pairs(Path(args.edge_pairs).read_text(encoding="utf-8"))
        alignment = align_by_hyperedge_ids(h1, h2, pairs)
    else:
        anchors = AnchorSet.empty()
        if args.anchors:
            anchors = parse_anchor_file(Path(args.anchors).read_text(encoding="utf-8"))
        alignment = align_wl_anchored(h1, h2, anchors)
        if alignment is None:
            print("NoIsomorphism", file=sys.stderr)
            return 1
    _write(args.output, format_alignment(alignment))
    return 0


def _cmd_fuse(args) -> int:
    d1 = Dataset.load(args.d1)
    d2 = Dataset.load(args.d2)
    phi = parse_node_mapping(Path(args.mapping).read_text(encoding="utf-8"))
    fuse_datasets(d1, d2, phi).save(args.output)
    return 0


def _cmd_bounds(args) -> int:
    doc: dict = {}
    b = BoundsInput(
        m=args.m,
        kappa=args.kappa,
        L=args.length_bound,
        c_pi=args.c_pi,
        C_pi=args.C_pi,
        epsilon=args.epsilon,
        delta=args.delta,
        N=args.n_samples,
    )
    k_min, n_min = mm_sample_bounds(b)
    doc["K_min"] = k_min
    doc["N_min"] = n_min
    if args.n_samples is not None:
        doc["minimax_lower_bound"] = lower_bound_risk(args.m, args.n_samples)
    if args.m0 is not None and args.kappa0 is not None:
        lo, hi = lemma_rr_bounds(args.m0, args.kappa0)
        doc["weight_min_floor"] = lo
        doc["weight_max_ceiling"] = hi
    _write(args.output, json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_sweep(args) -> int:
    cfg = SweepConfig.load(args.config)
    rows = run_sweep(cfg, jobs=args.jobs)
    save_csv(rows, args.output)
    return 0


def _cmd_fit(args) -> int:
    slope, intercept = fit_scaling(load_csv(args.csv), args.x_field, args.y_field)
    _write(args.output, json.dumps({"slope": slope, "intercept": intercept}, indent=2) + "\n")
    return 0


def _cmd_kg_ingest(args) -> int:
    kg = ingest_edge_list(args.tsv)
    _write(args.output, kg.to_tsv())
    return 0


def _cmd_kg_extract(args) -> int:
    kg = ingest_edge_list(args.kg)
    truth, entities = extract_subgraph(kg, SubgraphSpec(args.source.lower(), args.k, args.d))
    doc = {
        "source": args.source.lower(),
        "k": args.k,
        "d": args.d,
        "entities": entities,
        "edges": [list(e) for e in sorted(truth.edges)],
    }
    _write(args.output, json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_kg_prompt(args) -> int:
    doc = json.loads(Path(args.subgraph).read_text(encoding="utf-8"))
    k = args.k if args.k is not None else doc["k"]
    _write(args.output, render_prompt(doc["entities"], k))
    return 0


def _cmd_kg_parse(args) -> int:
    from .kgeval import parse_edgelist

    doc = json.loads(Path(args.subgraph).read_text(encoding="utf-8"))
    response = Path(args.response).read_text(encoding="utf-8")
    pairs, unparsed = parse_edgelist(response, doc["entities"])
    out = {"pairs": [list(p) for p in sorted(pairs)], "unparsed": unparsed}
    _write(args.output, json.dumps(out, indent=2) + "\n")
    return 0


def _cmd_kg_chat(args) -> int:
    prompt = Path(args.prompt_file).read_text(encoding="utf-8")
    if args.responses_dir:
        text = replay_completion(args.responses_dir, prompt)
    else:
        config = EndpointConfig.load(args.endpoint_config)
        text = chat_completion(config, prompt)
    _write(args.output, text)
    return 0


def _cmd_kg_eval(args) -> int:
    kg = ingest_edge_list(args.kg)
    spec = SubgraphSpec(args.source.lower(), args.k, args.d)
    truth, entities = extract_subgraph(kg, spec)
    prompt = render_prompt(entities, args.k)
    if args.responses_dir:
        response = replay_completion(args.responses_dir, prompt)
    elif args.response:
        response = Path(args.response).read_text(encoding="utf-8")
    else:
        config = EndpointConfig.load(args.endpoint_config)
        response = chat_completion(config, prompt)
    result = evaluate_response(truth, entities, response)
    _write(args.output, result.to_json())
    if args.csv:
        _write(args.csv, eval_csv_row(spec.source, spec.k, spec.d, args.model, result))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit unsigned master seed")
    common.add_argument(
        "--log-level",
        default="warning",
        choices=("debug", "info", "warning", "error"),
        help="logging verbosity",
    )

    parser = argparse.ArgumentParser(
        prog="hgrec",
        description="Weighted hypergraph recovery, alignment, and relation evaluation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a weighted benchmark hypergraph (.hg)")
    p.add_argument("--structure", required=True, choices=("star", "x", "chain", "wcgnm", "frucht"))
    p.add_argument("--n", type=int, default=0, help="node count (ignored for frucht)")
    p.add_argument("--p", type=float, default=None, help="edge density (wcgnm only)")
    p.add_argument("--w-min", type=float, default=1.0)
    p.add_argument("--w-max", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("sample", parents=[common], help="draw i.i.d. hyperedge samples (.ds)")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("-n", "--n-samples", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("mm-sample", parents=[common], help="draw masked-modeling records (.mm)")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("-n", "--n-samples", type=int, required=True, help="outer draws N")
    p.add_argument("-k", "--k-inner", type=int, default=1, help="masked variants per draw K")
    p.add_argument("--mask", default="uniform1")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_mm_sample)

    p = sub.add_parser("train", parents=[common], help="train the count-ratio oracle from .mm data")
    p.add_argument("--mm-data", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("recover", parents=[common], help="two-phase recovery from an oracle")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--oracle", help="trained oracle JSON")
    src.add_argument("--exact-from", help="hypergraph file for an exact population oracle")
    p.add_argument("--candidates", default="pairs", help="'pairs' or a candidate edge file")
    p.add_argument("--mask", default="uniform1")
    p.add_argument("--aggregation", default="first", choices=("first", "geometric_mean"))
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_recover)

    p = sub.add_parser("report", parents=[common], help="recovery error report vs a truth file")
    p.add_argument("--truth", required=True)
    p.add_argument("--rec", required=True)
    p.add_argument("--relabel", help="node mapping file applied to the recovered hypergraph")
    p.add_argument("--disconnected", action="store_true", help="mark the meta-graph as disconnected")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("align", parents=[common], help="align the entities of two hypergraphs")
    p.add_argument("--h1", required=True)
    p.add_argument("--h2", required=True)
    p.add_argument("--method", required=True, choices=("exact", "ids", "wl-ir"))
    p.add_argument("--anchors", help="anchor file (wl-ir)")
    p.add_argument("--edge-pairs", help="edge correspondence file (ids)")
    p.add_argument("--max-nodes", type=int, default=8, help="cap for the exact search")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_align)

    p = sub.add_parser("fuse", parents=[common], help="relabel one dataset and append another")
    p.add_argument("--d1", required=True)
    p.add_argument("--d2", required=True)
    p.add_argument("--mapping", required=True, help="node mapping file (alignment output)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_fuse)

    p = sub.add_parser("bounds", parents=[common], help="evaluate the closed-form sample bounds")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--length-bound", "-L", type=int, required=True, dest="length_bound")
    p.add_argument("--c-pi", type=float, required=True)
    p.add_argument("--C-pi", type=float, required=True, dest="C_pi")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--n-samples", type=int, default=None, help="evaluate the minimax floor at N")
    p.add_argument("--m0", type=int, default=None, help="lemma bounds: distribution size")
    p.add_argument("--kappa0", type=float, default=None, help="lemma bounds: range ratio")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("sweep", parents=[common], help="run a recovery-error sweep to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("fit", parents=[common], help="log-log scaling fit over sweep rows")
    p.add_argument("--csv", required=True)
    p.add_argument("--x-field", default="N")
    p.add_argument("--y-field", default="d_plugin")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("kg-ingest", parents=[common], help="normalize a relatedness TSV")
    p.add_argument("--tsv", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_kg_ingest)

    p = sub.add_parser("kg-extract", parents=[common], help="top-k depth-d subgraph around a source")
    p.add_argument("--kg", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_kg_extract)

    p = sub.add_parser("kg-prompt", parents=[common], help="render the evaluation prompt")
    p.add_argument("--subgraph", required=True, help="kg-extract output JSON")
    p.add_argument("-k", type=int, default=None, help="override the embedded k")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_kg_prompt)

    p = sub.add_parser("kg-parse", parents=[common], help="parse an edgelist out of a response")
    p.add_argument("--response", required=True)
    p.add_argument("--subgraph", required=True, help="kg-extract output JSON (vocabulary)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_kg_parse)

    p = sub.add_parser("kg-chat", parents=[common], help="fetch a model response for a prompt")
    p.add_argument("--endpoint-config", help="endpoint JSON (live mode)")
    p.add_argument("--prompt-file", required=True)
    p.add_argument("--responses-dir", help="offline replay directory keyed by prompt hash")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_kg_chat)

    p = sub.add_parser("kg-eval", parents=[common], help="end-to-end relation evaluation")
    p.add_argument("--kg", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--responses-dir", help="offline replay directory")
    p.add_argument("--response", help="response text file")
    p.add_argument("--endpoint-config", help="endpoint JSON (live mode)")
    p.add_argument("--model", default="unknown", help="model label for the CSV row")
    p.add_argument("--csv", help="also write a CSV row here")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_kg_eval)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level.upper()))
    try:
        return args.func(args)
    except (HgrecError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
