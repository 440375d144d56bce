"""Command-line pipeline: one subcommand per stage, files in between.

Exit status: 0 success, 1 usage error, 2 data error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__

log = logging.getLogger("ideoprop")

DEFAULT_SEED = 42
EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _stage_defaults() -> dict:
    from .infovgae import TrainConfig
    from .neardup import NearDupParams
    from .synthlab import SynthGraphConfig

    return {
        "train": TrainConfig().to_dict(),
        "neardup": dataclasses.asdict(NearDupParams()),
        "filter": {"min_deg": 10},
        "nmf": {"k": 2, "iters": 500},
        "synth": {k: v for k, v in dataclasses.asdict(SynthGraphConfig()).items()},
        "synth_images": {"n_base": 50, "variants_per_base": 4},
        "sweep": {"fractions": [0.0, 0.2, 0.4, 0.6, 0.8], "seeds": [0, 1, 2, 3, 4]},
    }


def load_config(path) -> dict:
    """Stage-keyed document merged over the defaults; unknown stages or keys are rejected."""
    cfg = _stage_defaults()
    if path is None:
        return cfg
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise DataError(f"config {path}: top level must be an object")
    for stage, section in doc.items():
        if stage not in cfg:
            raise DataError(f"config {path}: unknown stage {stage!r} (known: {', '.join(sorted(cfg))})")
        if not isinstance(section, dict):
            raise DataError(f"config {path}: stage {stage!r} must be an object")
        unknown = sorted(set(section) - set(cfg[stage]))
        if unknown:
            raise DataError(f"config {path}: unknown key(s) in {stage!r}: {', '.join(unknown)}")
        cfg[stage].update(section)
    return cfg


def _apply_seed(cfg: dict, seed: int) -> None:
    for stage in ("train", "neardup", "synth"):
        cfg[stage]["seed"] = seed


def _write_manifest(out: Path, command: str, seed: int, cfg: dict, extra: dict | None = None) -> None:
    directory = out if out.is_dir() else out.parent
    manifest = {"command": command, "seed": seed, "version": __version__, "config": cfg}
    manifest.update(extra or {})
    (directory / "run-manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _read_labels(path) -> dict:
    from .evalkit import load_truth

    return load_truth(path)


def _read_ids(path) -> set:
    ids = set()
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                try:
                    ids.add(int(json.loads(line)["assertion_id"]))
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise DataError(f"{path}: line {lineno}: malformed record ({exc})") from exc
    return ids


# -- stages ---------------------------------------------------------------

def cmd_cluster(args, cfg):
    from .neardup import (ExternalEmbeddings, NearDupParams, PerceptualHash, find_assertions,
                          load_corpus, save_assertions)

    corpus = load_corpus(args.images)
    if not corpus:
        raise DataError(f"{args.images}: no .pgm or .ppm files")
    if args.filter == "dhash":
        filt = PerceptualHash(int(args.threshold)) if args.threshold is not None else PerceptualHash()
    elif args.filter == "embeddings":
        if not args.embeddings:
            raise UsageError("--filter embeddings needs --embeddings <csv>")
        filt = ExternalEmbeddings.from_csv(args.embeddings, args.threshold if args.threshold is not None else 0.8)
    else:
        filt = None
    assertions, pairs = find_assertions(corpus, filt, NearDupParams(**cfg["neardup"]))
    save_assertions(assertions, args.out)
    return {"n_images": len(corpus), "n_assertions": len(assertions), "n_verified_pairs": len(pairs)}


def cmd_build_graph(args, cfg):
    from .bhin import build_graph, filter_min_degree, ingest_posts, save_graph
    from .neardup import load_assertions

    posts = ingest_posts(args.posts)
    assertions = load_assertions(args.assertions)
    min_deg = args.min_degree if args.min_degree is not None else cfg["filter"]["min_deg"]
    cfg["filter"]["min_deg"] = min_deg
    g = filter_min_degree(build_graph(posts, assertions), min_deg)
    save_graph(g, args.out)
    return {"n_nodes": g.n_nodes, "n_edges": g.n_edges, "min_deg": min_deg}


def _anchor_list(g, labels: dict):
    from .bhin import ASSERTION

    pos = {g.nodes[i][0]: i for i in g.indices(ASSERTION)}
    missing = sorted(a for a in labels if a not in pos)
    if missing:
        raise DataError(f"label for assertion {missing[0]} which is not in the graph")
    return sorted((pos[a], int(k)) for a, k in labels.items())


def cmd_train(args, cfg):
    from .bhin import load_graph, prepare_inputs
    from .evalkit import plot_history, save_embedding
    from .infovgae import TrainConfig, train

    g = load_graph(args.graph)
    tcfg = TrainConfig.from_dict(cfg["train"])
    anchors = _anchor_list(g, _read_labels(args.labels)) if args.labels else []
    state = train(prepare_inputs(g), tcfg, anchors)
    save_embedding(args.out, g.nodes, state.mu)
    hist_path = Path(args.out).with_suffix(".history.csv")
    keys = list(state.history)
    with open(hist_path, "w") as fh:
        fh.write("epoch," + ",".join(keys) + "\n")
        for e in range(len(state.history[keys[0]])):
            fh.write(f"{e}," + ",".join(repr(float(state.history[k][e])) for k in keys) + "\n")
    if args.plot:
        plot_history(state.history, args.plot, tcfg.kl_target)
    return {"n_anchors": len(anchors), "history": str(hist_path)}


def cmd_nmf(args, cfg):
    from .baseline_nmf import incidence, nmf_factorize
    from .bhin import load_graph
    from .evalkit import save_embedding

    g = load_graph(args.graph)
    B, users, cols = incidence(g)
    f = nmf_factorize(B, int(cfg["nmf"]["k"]), int(cfg["nmf"]["iters"]), cfg["train"]["seed"])
    emb = np.zeros((g.n_nodes, f.k))
    emb[users] = f.W
    emb[cols] = f.H.T
    save_embedding(args.out, g.nodes, emb)
    return {"final_loss": f.losses[-1]}


def cmd_evaluate(args, cfg):
    from .evalkit import (anchor_mapping, assign_axes, evaluate, load_embedding, load_truth,
                          save_report, scatter_svg)

    nodes, mu = load_embedding(args.embedding)
    truth = load_truth(args.truth)
    rows = [i for i, (_, kind) in enumerate(nodes) if kind == "assertion"]
    if not rows:
        raise DataError(f"{args.embedding}: no assertion rows")
    try:
        ids = [int(nodes[i][0]) for i in rows]
    except ValueError as exc:
        raise DataError(f"{args.embedding}: assertion ids must be integers ({exc})") from exc
    axes, _ = assign_axes(mu[rows])
    assignments = dict(zip(ids, (int(a) for a in axes)))
    exclude = _read_ids(args.exclude) if args.exclude else set()
    mapping = None
    if args.labels:
        anchors = _read_labels(args.labels)
        exclude |= set(anchors)
        mapping = anchor_mapping(anchors, truth, mu.shape[1])
    report = evaluate(assignments, truth, exclude, mapping, n_axes=mu.shape[1])
    save_report(args.out, report)
    if args.plot:
        labels = [truth.get(int(n[0])) if n[1] == "assertion" else None for n in nodes]
        scatter_svg(mu, [k for _, k in nodes], args.plot, labels)
    print(json.dumps(report.to_json(), sort_keys=True))
    return report.to_json()


def cmd_synth_graph(args, cfg):
    from .bhin import build_graph, save_graph
    from .evalkit import save_truth
    from .neardup import save_assertions
    from .synthlab import SynthGraphConfig, gen_graph

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sg = gen_graph(SynthGraphConfig(**cfg["synth"]))
    with open(out / "posts.jsonl", "w") as fh:
        for p in sg.posts:
            fh.write(json.dumps({"user_id": p.user_id, "image_id": p.image_id}) + "\n")
    save_assertions(sg.assertions, out / "assertions.jsonl")
    save_truth(out / "truth.jsonl", sg.truth)
    with open(out / "neutral.jsonl", "w") as fh:
        for a in sorted(sg.neutral):
            fh.write(json.dumps({"assertion_id": a}) + "\n")
    g = build_graph(sg.posts, sg.assertions)
    save_graph(g, out / "graph.json")
    return {"n_posts": len(sg.posts), "n_assertions": len(sg.assertions), "n_neutral": len(sg.neutral)}


def cmd_synth_images(args, cfg):
    from .imgcore import save_pgm
    from .synthlab import gen_image_suite

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sc = cfg["synth_images"]
    suite = gen_image_suite(int(sc["n_base"]), int(sc["variants_per_base"]), cfg["neardup"]["seed"])
    for i, img in suite.images.items():
        save_pgm(img, out / f"{i}.pgm")
    with open(out / "true_pairs.jsonl", "w") as fh:
        for a, b in sorted(suite.true_pairs):
            fh.write(json.dumps({"a": a, "b": b}) + "\n")
    with open(out / "transforms.jsonl", "w") as fh:
        for vid, (bid, chain) in sorted(suite.transforms.items()):
            fh.write(json.dumps({"image_id": vid, "base": bid, "chain": [s.to_json() for s in chain]}) + "\n")
    return {"n_images": len(suite.images), "n_true_pairs": len(suite.true_pairs)}


def cmd_sweep_neutral(args, cfg):
    from .evalkit import plot_sweep
    from .infovgae import TrainConfig
    from .synthlab import SynthGraphConfig, neutral_sweep, write_sweep_csv

    sw = cfg["sweep"]
    fractions = [float(f) for f in (args.fractions.split(",") if args.fractions else sw["fractions"])]
    rows = neutral_sweep(SynthGraphConfig(**cfg["synth"]), fractions, TrainConfig.from_dict(cfg["train"]),
                         seeds=[int(s) for s in sw["seeds"]],
                         progress=lambda f, s, f1: log.info("fraction %.2f seed %d f1 %.4f", f, s, f1))
    write_sweep_csv(rows, args.out)
    if args.plot:
        plot_sweep(rows, args.plot)
    return {"rows": rows}


COMMANDS = {
    "cluster": cmd_cluster,
    "build-graph": cmd_build_graph,
    "train": cmd_train,
    "nmf": cmd_nmf,
    "evaluate": cmd_evaluate,
    "synth-graph": cmd_synth_graph,
    "synth-images": cmd_synth_images,
    "sweep-neutral": cmd_sweep_neutral,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="stage-keyed JSON config")
    common.add_argument("--seed", type=int, help=f"seed for every stochastic stage (default {DEFAULT_SEED})")
    common.add_argument("--out", required=True, help="output file (directory for synth-*)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="ideoprop", description="Ideology classification of images from propagation patterns.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True

    s = sub.add_parser("cluster", parents=[common], help="images -> assertions (JSON-lines)")
    s.add_argument("--images", required=True, help="directory of .pgm/.ppm files")
    s.add_argument("--filter", choices=("none", "dhash", "embeddings"), default="none")
    s.add_argument("--embeddings", help="CSV image_id,v0,v1,...")
    s.add_argument("--threshold", type=float, help="dhash Hamming or cosine threshold")

    s = sub.add_parser("build-graph", parents=[common], help="posts + assertions -> graph JSON")
    s.add_argument("--posts", required=True)
    s.add_argument("--assertions", required=True)
    s.add_argument("--min-degree", type=int, help="keep nodes with more than this many edges (default 10)")

    s = sub.add_parser("train", parents=[common], help="graph -> embedding CSV")
    s.add_argument("--graph", required=True)
    s.add_argument("--labels", help="anchor labels, JSON-lines {assertion_id, label}")
    s.add_argument("--plot", help="loss-history figure (PNG)")

    s = sub.add_parser("nmf", parents=[common], help="graph -> NMF baseline embedding CSV")
    s.add_argument("--graph", required=True)

    s = sub.add_parser("evaluate", parents=[common], help="embedding + truth -> report JSON")
    s.add_argument("--embedding", required=True)
    s.add_argument("--truth", required=True)
    s.add_argument("--labels", help="anchor labels used in training; excluded and used for the axis mapping")
    s.add_argument("--exclude", help="JSON-lines of assertion ids to leave out (e.g. neutral.jsonl)")
    s.add_argument("--plot", help="scatter SVG of assertion embeddings")

    sub.add_parser("synth-graph", parents=[common], help="planted two-camp graph files")
    sub.add_parser("synth-images", parents=[common], help="near-duplicate image corpus")

    s = sub.add_parser("sweep-neutral", parents=[common], help="F1 against neutral fraction (CSV)")
    s.add_argument("--fractions", help="comma-separated, ascending")
    s.add_argument("--plot", help="sweep figure (PNG)")
    return p


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    stage = args.command
    try:
        cfg = load_config(args.config)
        # --seed is the single source of randomness; seed keys in a config file are overridden
        seed = DEFAULT_SEED if args.seed is None else args.seed
        _apply_seed(cfg, seed)
        print(f"seed: {seed}", file=sys.stderr)
        extra = COMMANDS[stage](args, cfg)
        _write_manifest(Path(args.out), stage, seed, cfg, {"result": extra})
    except UsageError as exc:
        print(f"{stage}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ValueError, KeyError, OSError, RuntimeError) as exc:
        print(f"{stage}: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
