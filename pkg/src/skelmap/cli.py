"""Command-line front end for batch experiments.

Every subcommand reads/writes plain files (CSV clouds and embeddings, JSON
skeletons, diagrams, and reports) so whole pipelines can be scripted and
diffed.  All randomness flows from a single --seed flag; identical flags
and seeds produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import diagram_metrics, persistence
from .embedding import (
    Embedding,
    isomap,
    l_isomap,
    linear_project,
    projection_search,
    random_landmarks,
    sphere_directions,
)
from .geometry import (
    SHAPE_NAMES,
    DisconnectedGraphError,
    ParameterError,
    PointCloud,
    build_knn_graph,
    cloud_to_csv,
    delay_embedding,
    generate_shape,
    load_cloud,
    maxmin_subsample,
    save_cloud,
)
from .quality import quality_report
from .skeleton import (
    Skeleton,
    build_cover,
    compute_filter,
    extract_landmarks,
    mapper_skeleton,
)
from .tearing import CutSpec, evaluate_tear, rank_cuts, ranked_results_json, tear_graph

EXIT_OK = 0
EXIT_USAGE = 2  # argparse's own convention for bad flags
EXIT_PARAMETER = 3
EXIT_DISCONNECTED = 4
EXIT_IO = 5
EXIT_FORMAT = 6


def _write_text(path, text):
    with open(path, "w") as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _parse_shape_params(items):
    params = {}
    for item in items or []:
        if "=" not in item:
            raise ParameterError("shape parameter %r is not key=value" % item)
        key, value = item.split("=", 1)
        params[key] = float(value)
    return params


def _load_skeleton(path) -> Skeleton:
    with open(path) as fh:
        return Skeleton.from_json(fh.read())


def _load_embedding(path, sidecar_path=None) -> Embedding:
    cloud = load_cloud(path)
    sidecar_path = sidecar_path or path + ".json"
    try:
        with open(sidecar_path) as fh:
            meta = json.load(fh)
    except FileNotFoundError:
        meta = {}
    landmarks = meta.get("landmarks")
    return Embedding(
        coords=cloud.points,
        method=meta.get("method", "unknown"),
        landmarks=tuple(landmarks) if landmarks is not None else None,
        params=meta.get("params", {}),
    )


def _subsample_indices(cloud: PointCloud, size: int, seed: int):
    if size and cloud.n > size:
        return maxmin_subsample(cloud, size, seed=seed)
    return list(range(cloud.n))


def _diagrams_json(diagrams) -> str:
    obj = {"dim%d" % dg.dim: json.loads(dg.to_json()) for dg in diagrams}
    return _dump_json(obj)


def _load_diagram(path, dim: int):
    with open(path) as fh:
        obj = json.load(fh)
    key = "dim%d" % dim
    if key not in obj:
        raise ParameterError("diagram file %s has no dimension-%d entry" % (path, dim))
    return persistence.PersistenceDiagram.from_json(json.dumps(obj[key]))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_generate(args):
    params = _parse_shape_params(args.param)
    cloud = generate_shape(args.shape, args.n, noise=args.noise, seed=args.seed, **params)
    save_cloud(args.output, cloud, header=args.header)
    return EXIT_OK


def _cmd_delay_embed(args):
    with open(args.input) as fh:
        text = fh.read()
    values = [float(tok) for tok in text.replace(",", " ").split()]
    cloud = delay_embedding(values, window=args.window, step=args.step)
    save_cloud(args.output, cloud, header=args.header)
    return EXIT_OK


def _build_skeleton(cloud, args):
    graph = build_knn_graph(cloud, args.k)
    base = args.base
    if base not in ("extreme", "barycenter"):
        base = int(base)
    f = compute_filter(cloud, graph, args.filter, base)
    cover = build_cover(f, args.intervals, args.overlap)
    eps = args.eps if args.eps == "auto" else float(args.eps)
    skeleton = mapper_skeleton(
        cloud, graph, f, cover, dbscan_eps=eps, dbscan_minpts=args.minpts
    )
    return graph, skeleton


def _cmd_skeleton(args):
    cloud = load_cloud(args.input)
    _, skeleton = _build_skeleton(cloud, args)
    _write_text(args.output, skeleton.to_json())
    return EXIT_OK


def _cmd_embed(args):
    cloud = load_cloud(args.input)
    if args.method == "isomap":
        emb = isomap(cloud, k=args.k, d=args.d)
    elif args.method == "l-isomap-random":
        landmarks = random_landmarks(cloud.n, args.landmarks, seed=args.seed)
        emb = l_isomap(cloud, landmarks, k=args.k, d=args.d, method=args.method)
    elif args.method == "l-isomap-homology":
        if args.skeleton:
            skeleton = _load_skeleton(args.skeleton)
        else:
            _, skeleton = _build_skeleton(cloud, args)
        landmarks = extract_landmarks(skeleton)
        emb = l_isomap(cloud, landmarks, k=args.k, d=args.d, method=args.method)
    else:
        raise ParameterError("unknown embedding method %r" % args.method)
    save_cloud(args.output, emb.as_cloud(), header=args.header)
    _write_text(args.output + ".json", emb.sidecar_json())
    return EXIT_OK


def _cmd_persistence(args):
    cloud = load_cloud(args.input)
    idx = _subsample_indices(cloud, args.subsample, args.seed)
    diagrams = persistence.vr_persistence(
        cloud.euclidean_distances(idx), max_dim=args.max_dim
    )
    _write_text(args.output, _diagrams_json(diagrams))
    return EXIT_OK


def _cmd_compare(args):
    a = _load_diagram(args.first, args.dim)
    b = _load_diagram(args.second, args.dim)
    if args.metric == "wasserstein":
        value = diagram_metrics.wasserstein(a, b, args.p, ignore_scale_cap=True)[0]
    elif args.metric == "bottleneck":
        value = diagram_metrics.bottleneck(a, b, ignore_scale_cap=True)[0]
    else:
        raise ParameterError("unknown metric %r" % args.metric)
    print("%.17g" % value)
    return EXIT_OK


def _cmd_quality(args):
    cloud = load_cloud(args.input)
    emb = _load_embedding(args.embedding, args.sidecar)
    report = quality_report(cloud, emb, subsample_size=args.subsample, seed=args.seed)
    _write_text(args.output, report.to_json())
    return EXIT_OK


def _cmd_tear(args):
    cloud = load_cloud(args.input)
    skeleton = _load_skeleton(args.skeleton)
    graph = build_knn_graph(cloud, args.k)
    u, v = (int(x) for x in args.edge.split(","))
    radius = args.radius if args.radius == "auto" else float(args.radius)
    cut = CutSpec(skeleton_edge=(u, v), t=args.t, locality_radius=radius)
    result = tear_graph(cloud, graph, skeleton, cut, global_plane=args.global_plane)
    result = evaluate_tear(
        cloud, result, d=args.d, subsample_size=args.subsample, seed=args.seed
    )
    _write_text(args.output, _dump_json(result.summary()))
    if args.embedding_out and result.embedding is not None:
        save_cloud(args.embedding_out, result.embedding.as_cloud())
        _write_text(args.embedding_out + ".json", result.embedding.sidecar_json())
    return EXIT_OK


def _cmd_tear_rank(args):
    cloud = load_cloud(args.input)
    skeleton = _load_skeleton(args.skeleton)
    graph = build_knn_graph(cloud, args.k)
    results = rank_cuts(
        cloud, graph, skeleton, d=args.d, subsample_size=args.subsample, seed=args.seed
    )
    _write_text(args.output, ranked_results_json(results))
    return EXIT_OK


def _cmd_project_search(args):
    cloud = load_cloud(args.input)
    ranked = projection_search(
        cloud,
        args.m,
        rank_metric=args.metric,
        subsample_size=args.subsample,
        seed=args.seed,
    )
    obj = [
        {
            "rank": pos,
            "vector": direction.vector.tolist(),
            "score": list(score) if isinstance(score, tuple) else score,
        }
        for pos, (direction, score) in enumerate(ranked)
    ]
    _write_text(args.output, _dump_json(obj))
    return EXIT_OK


def _cmd_serve(args):
    import uvicorn

    from .service import create_app

    app = create_app(static_dir=args.static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _add_skeleton_flags(sp):
    sp.add_argument("--k", type=int, default=8, help="kNN graph size (default 8)")
    sp.add_argument("--filter", default="dtb", help="filter kind (default dtb)")
    sp.add_argument(
        "--base",
        default="extreme",
        help="base point: extreme | barycenter | integer index (default extreme)",
    )
    sp.add_argument(
        "--intervals", type=int, default=10, help="cover interval count (default 10)"
    )
    sp.add_argument(
        "--overlap", type=float, default=0.3, help="cover overlap fraction (default 0.3)"
    )
    sp.add_argument("--eps", default="auto", help="DBSCAN eps: auto | value")
    sp.add_argument("--minpts", type=int, default=5, help="DBSCAN minpts (default 5)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skelmap",
        description="Skeleton-guided landmark Isomap with homology-based quality checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("generate", help="sample a synthetic shape to CSV")
    sp.add_argument("--shape", required=True, choices=SHAPE_NAMES)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--noise", type=float, default=0.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument(
        "--param", action="append", help="extra shape parameter key=value", default=None
    )
    sp.add_argument("--header", action="store_true")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=_cmd_generate)

    sp = sub.add_parser("delay-embed", help="delay embedding of a scalar signal")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("--window", type=int, required=True)
    sp.add_argument("--step", type=int, default=1)
    sp.add_argument("--header", action="store_true")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=_cmd_delay_embed)

    sp = sub.add_parser("skeleton", help="mapper skeleton of a point cloud")
    sp.add_argument("-i", "--input", required=True)
    _add_skeleton_flags(sp)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=_cmd_skeleton)

    sp = sub.add_parser("embed", help="embed a cloud (writes CSV + sidecar JSON)")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument(
        "--method",
        required=True,
        choices=("isomap", "l-isomap-random", "l-isomap-homology"),
    )
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--landmarks", default="auto", help="random landmark count or auto")
    sp.add_argument("--skeleton", help="skeleton JSON for l-isomap-homology")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--header", action="store_true")
    _add_skeleton_flags(sp)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=_cmd_embed)

    sp = sub.add_parser("persistence", help="Vietoris-Rips diagrams of a cloud")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("--max-dim", type=int, default=1, choices=(0, 1))
    sp.add_argument("--subsample", type=int, default=256, help="0 disables subsampling")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=_cmd_persistence)

    sp = sub.add_parser("compare", help="distance between two diagram files")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--metric", default="wasserstein", choices=("wasserstein", "bottleneck"))
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--dim", type=int, default=1, choices=(0, 1))
    sp.set_defaults(func=_cmd_compare)

    sp = sub.add_parser("quality", help="quality report for a cloud + embedding")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("-e", "--embedding", required=True)
    sp.add_argument("--sidecar", help="embedding sidecar JSON (default <embedding>.json)")
    sp.add_argument("--subsample", type=int, default=256)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=_cmd_quality)

    sp = sub.add_parser("tear", help="apply one skeleton-guided cut")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("--skeleton", required=True)
    sp.add_argument("--k", type=int, default=8)
    sp.add_argument("--edge", required=True, help="skeleton edge as u,v")
    sp.add_argument("--t", type=float, default=0.5)
    sp.add_argument("--radius", default="auto")
    sp.add_argument("--global-plane", action="store_true")
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--subsample", type=int, default=256)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--embedding-out")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=_cmd_tear)

    sp = sub.add_parser("tear-rank", help="evaluate and rank all skeleton-edge cuts")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("--skeleton", required=True)
    sp.add_argument("--k", type=int, default=8)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--subsample", type=int, default=256)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=_cmd_tear_rank)

    sp = sub.add_parser("project-search", help="rank sphere-sampled projections")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("--m", type=int, default=100)
    sp.add_argument(
        "--metric", default="wd1", choices=("wd1", "wd1_then_wd0", "bottleneck")
    )
    sp.add_argument("--subsample", type=int, default=256)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=_cmd_project_search)

    sp = sub.add_parser("serve", help="start the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    sp.add_argument("--static-dir", help="directory of UI assets to serve at /")
    sp.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARAMETER
    except DisconnectedGraphError as exc:
        print("error: graph is disconnected (component sizes %s)" % (exc.component_sizes,),
              file=sys.stderr)
        return EXIT_DISCONNECTED
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print("error: malformed input (%s)" % exc, file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
