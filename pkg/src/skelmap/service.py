"""HTTP/JSON API exposing the pipeline for interactive front ends.

Sessions hold a point cloud plus caches of derived artifacts (skeletons,
embeddings, diagrams, tear results) keyed by a hash of every parameter
that affects the result, so identical requests return identical bodies.
Long computations run on a worker pool; when they exceed the synchronous
timeout the endpoint answers 202 with a job id to poll.
"""

from __future__ import annotations

import hashlib
import json
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeoutError
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import diagram_metrics, persistence
from .embedding import (
    Embedding,
    isomap,
    l_isomap,
    linear_project,
    max_workers,
    projection_search,
    random_landmarks,
)
from .geometry import (
    DisconnectedGraphError,
    ParameterError,
    PointCloud,
    build_knn_graph,
    cloud_from_csv,
    generate_shape,
    maxmin_subsample,
)
from .quality import quality_report
from .skeleton import (
    build_cover,
    compute_filter,
    extract_landmarks,
    mapper_skeleton,
)
from .tearing import CutSpec, evaluate_tear, rank_cuts, tear_graph

DEFAULT_SYNC_TIMEOUT = 2.0


def _param_hash(kind: str, params: dict) -> str:
    text = kind + ":" + json.dumps(params, sort_keys=True)
    return hashlib.sha1(text.encode()).hexdigest()[:16]


@dataclass
class Session:
    id: str
    cloud: PointCloud
    lock: threading.Lock = field(default_factory=threading.Lock)
    skeletons: dict = field(default_factory=dict)  # hash -> (Skeleton, response)
    embeddings: dict = field(default_factory=dict)  # hash -> (Embedding, response)
    responses: dict = field(default_factory=dict)  # hash -> cached response body
    jobs: dict = field(default_factory=dict)  # job id -> {"status", "result"/"error"}
    latest_skeleton: str | None = None


def _embedding_body(emb: Embedding, report, hash_id: str) -> dict:
    return {
        "hash": hash_id,
        "coords": emb.coords.tolist(),
        "method": emb.method,
        "landmarks": list(emb.landmarks) if emb.landmarks is not None else None,
        "quality": json.loads(report.to_json()),
    }


def _diagram_body(diagrams) -> dict:
    return {"dim%d" % dg.dim: json.loads(dg.to_json()) for dg in diagrams}


def create_app(static_dir=None, sync_timeout: float = DEFAULT_SYNC_TIMEOUT) -> FastAPI:
    app = FastAPI(title="skelmap service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    pool = ThreadPoolExecutor(max_workers=max_workers())

    @app.exception_handler(ParameterError)
    async def _parameter_error(request: Request, exc: ParameterError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(DisconnectedGraphError)
    async def _disconnected(request: Request, exc: DisconnectedGraphError):
        return JSONResponse(
            status_code=409,
            content={"detail": str(exc), "component_sizes": exc.component_sizes},
        )

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session %s" % session_id)
        return session

    def cached(session: Session, key: str, compute):
        """Return the cached response for key, computing it at most once."""
        with session.lock:
            if key in session.responses:
                return session.responses[key]
        body = compute()
        with session.lock:
            session.responses.setdefault(key, body)
            return session.responses[key]

    def run_with_jobs(session: Session, key: str, compute):
        """Synchronous result when fast enough, otherwise 202 + job id."""
        with session.lock:
            if key in session.responses:
                return session.responses[key]
            job_id = session.jobs.get(key)
        if job_id is None:
            job_id = uuid.uuid4().hex[:12]
            with session.lock:
                session.jobs[key] = job_id
                session.jobs[job_id] = {"status": "running"}

            def worker():
                try:
                    body = compute()
                    with session.lock:
                        session.responses[key] = body
                        session.jobs[job_id] = {"status": "done", "result": body}
                except ParameterError as exc:
                    with session.lock:
                        session.jobs[job_id] = {
                            "status": "error", "error": str(exc), "kind": "parameter",
                        }
                except DisconnectedGraphError as exc:
                    with session.lock:
                        session.jobs[job_id] = {
                            "status": "error",
                            "error": str(exc),
                            "kind": "disconnected",
                            "component_sizes": exc.component_sizes,
                        }
                except Exception as exc:  # surfaced through the job status
                    with session.lock:
                        session.jobs[job_id] = {
                            "status": "error", "error": str(exc), "kind": "internal",
                        }

            future = pool.submit(worker)
            try:
                future.result(timeout=sync_timeout)
            except FutureTimeoutError:
                pass
        with session.lock:
            state = session.jobs.get(job_id, {"status": "running"})
        if state["status"] == "done":
            return state["result"]
        if state["status"] == "error":
            kind = state.get("kind", "internal")
            if kind == "parameter":
                return JSONResponse(status_code=422, content={"detail": state["error"]})
            if kind == "disconnected":
                return JSONResponse(
                    status_code=409,
                    content={
                        "detail": state["error"],
                        "component_sizes": state.get("component_sizes", []),
                    },
                )
            return JSONResponse(status_code=500, content={"detail": state["error"]})
        return JSONResponse(
            status_code=202,
            content={"job": job_id, "status_url": "/sessions/%s/jobs/%s" % (session.id, job_id)},
        )

    # -- endpoints ---------------------------------------------------------

    @app.post("/sessions")
    async def create_session(body: dict):
        if "csv" in body:
            cloud = cloud_from_csv(body["csv"])
        elif "shape" in body:
            params = body.get("params", {})
            cloud = generate_shape(
                body["shape"],
                int(body.get("n", 1000)),
                noise=float(body.get("noise", 0.0)),
                seed=int(body.get("seed", 0)),
                **params,
            )
        else:
            raise ParameterError("session body needs 'csv' or a 'shape' spec")
        session = Session(id=uuid.uuid4().hex[:12], cloud=cloud)
        sessions[session.id] = session
        return {"id": session.id, "n": cloud.n, "dim": cloud.dim}

    @app.get("/sessions/{session_id}")
    async def session_info(session_id: str):
        session = get_session(session_id)
        return {"id": session.id, "n": session.cloud.n, "dim": session.cloud.dim}

    @app.get("/sessions/{session_id}/points")
    async def session_points(session_id: str):
        session = get_session(session_id)
        return {"points": session.cloud.points.tolist()}

    @app.post("/sessions/{session_id}/skeleton")
    async def compute_skeleton(session_id: str, body: dict):
        session = get_session(session_id)
        params = {
            "filter": body.get("filter", "dtb"),
            "base": body.get("base", "extreme"),
            "k": int(body.get("k", 8)),
            "n": int(body.get("n", 10)),
            "p": float(body.get("p", 0.3)),
            "eps": body.get("eps", "auto"),
            "minpts": int(body.get("minpts", 5)),
        }
        key = _param_hash("skeleton", params)

        def compute():
            graph = build_knn_graph(session.cloud, params["k"])
            base = params["base"]
            if base not in ("extreme", "barycenter"):
                base = int(base)
            f = compute_filter(session.cloud, graph, params["filter"], base)
            cover = build_cover(f, params["n"], params["p"])
            eps = params["eps"] if params["eps"] == "auto" else float(params["eps"])
            skeleton = mapper_skeleton(
                session.cloud, graph, f, cover,
                dbscan_eps=eps, dbscan_minpts=params["minpts"],
            )
            body_out = json.loads(skeleton.to_json())
            body_out["hash"] = key
            body_out["landmarks"] = extract_landmarks(skeleton)
            body_out["cycle_rank"] = skeleton.cycle_rank()
            with session.lock:
                session.skeletons[key] = skeleton
                session.latest_skeleton = key
            return body_out

        return cached(session, key, compute)

    @app.post("/sessions/{session_id}/embed")
    async def compute_embedding(session_id: str, body: dict):
        session = get_session(session_id)
        params = {
            "method": body.get("method", "isomap"),
            "k": int(body.get("k", 8)),
            "d": int(body.get("d", 2)),
            "landmarks": body.get("landmarks"),
            "skeleton": body.get("skeleton"),
            "seed": int(body.get("seed", 0)),
        }
        key = _param_hash("embed", params)

        def compute():
            method = params["method"]
            if method == "isomap":
                emb = isomap(session.cloud, k=params["k"], d=params["d"])
            elif method == "l-isomap-random":
                count = params["landmarks"] or "auto"
                lm = random_landmarks(session.cloud.n, count, seed=params["seed"])
                emb = l_isomap(session.cloud, lm, k=params["k"], d=params["d"], method=method)
            elif method == "l-isomap-homology":
                sk_key = params["skeleton"] or session.latest_skeleton
                if sk_key is None or sk_key not in session.skeletons:
                    raise ParameterError(
                        "l-isomap-homology needs a computed skeleton (POST /skeleton first)"
                    )
                lm = extract_landmarks(session.skeletons[sk_key])
                emb = l_isomap(session.cloud, lm, k=params["k"], d=params["d"], method=method)
            else:
                raise ParameterError("unknown embedding method %r" % method)
            report = quality_report(session.cloud, emb, seed=params["seed"])
            with session.lock:
                session.embeddings[key] = emb
            return _embedding_body(emb, report, key)

        return run_with_jobs(session, key, compute)

    @app.post("/sessions/{session_id}/tear")
    async def tear(session_id: str, body: dict):
        session = get_session(session_id)
        if "edge" not in body:
            raise ParameterError("tear body needs an 'edge' [u, v]")
        params = {
            "edge": [int(x) for x in body["edge"]],
            "t": float(body.get("t", 0.5)),
            "radius": body.get("radius", "auto"),
            "k": int(body.get("k", 8)),
            "d": int(body.get("d", 2)),
            "global": bool(body.get("global", False)),
            "seed": int(body.get("seed", 0)),
            "skeleton": body.get("skeleton") or session.latest_skeleton,
        }
        if params["skeleton"] is None or params["skeleton"] not in session.skeletons:
            raise ParameterError("tear needs a computed skeleton (POST /skeleton first)")
        key = _param_hash("tear", params)

        def compute():
            skeleton = session.skeletons[params["skeleton"]]
            graph = build_knn_graph(session.cloud, params["k"])
            radius = params["radius"]
            if radius != "auto":
                radius = float(radius)
            cut = CutSpec(
                skeleton_edge=tuple(params["edge"]), t=params["t"], locality_radius=radius
            )
            result = tear_graph(
                session.cloud, graph, skeleton, cut, global_plane=params["global"]
            )
            if not result.connected:
                raise DisconnectedGraphError(result.torn_graph.component_sizes())
            result = evaluate_tear(session.cloud, result, d=params["d"], seed=params["seed"])
            out = result.summary()
            out["hash"] = key
            out["coords"] = result.embedding.coords.tolist()
            with session.lock:
                session.embeddings[key] = result.embedding
            return out

        return run_with_jobs(session, key, compute)

    @app.get("/sessions/{session_id}/tear/rank")
    async def tear_rank(session_id: str, k: int = 8, d: int = 2, seed: int = 0):
        session = get_session(session_id)
        sk_key = session.latest_skeleton
        if sk_key is None:
            raise ParameterError("tear/rank needs a computed skeleton (POST /skeleton first)")
        params = {"k": k, "d": d, "seed": seed, "skeleton": sk_key}
        key = _param_hash("tear-rank", params)

        def compute():
            skeleton = session.skeletons[sk_key]
            graph = build_knn_graph(session.cloud, k)
            results = rank_cuts(session.cloud, graph, skeleton, d=d, seed=seed)
            return {"hash": key, "results": [r.summary() for r in results]}

        return run_with_jobs(session, key, compute)

    @app.post("/sessions/{session_id}/project")
    async def project(session_id: str, body: dict):
        session = get_session(session_id)
        if "direction" not in body:
            raise ParameterError("project body needs a 'direction' vector")
        vector = np.asarray(body["direction"], dtype=np.float64)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise ParameterError("direction must be nonzero")
        vector = vector / norm
        params = {"direction": vector.tolist()}
        key = _param_hash("project", params)

        def compute():
            from .embedding import _orthobasis, Direction

            direction = Direction(vector=vector, basis=_orthobasis(vector))
            emb = linear_project(session.cloud, direction)
            with session.lock:
                session.embeddings[key] = emb
            return {"hash": key, "coords": emb.coords.tolist(), "direction": vector.tolist()}

        return cached(session, key, compute)

    @app.get("/sessions/{session_id}/project/search")
    async def project_search(session_id: str, m: int = 100, seed: int = 0):
        session = get_session(session_id)
        params = {"m": m, "seed": seed}
        key = _param_hash("project-search", params)

        def compute():
            ranked = projection_search(session.cloud, m, seed=seed)
            return {
                "hash": key,
                "directions": [
                    {
                        "rank": pos,
                        "vector": direction.vector.tolist(),
                        "score": score if not isinstance(score, tuple) else list(score),
                    }
                    for pos, (direction, score) in enumerate(ranked)
                ],
            }

        return run_with_jobs(session, key, compute)

    @app.get("/sessions/{session_id}/persistence")
    async def diagrams(session_id: str, target: str = "input", subsample: int = 256, seed: int = 0):
        session = get_session(session_id)
        params = {"target": target, "subsample": subsample, "seed": seed}
        key = _param_hash("persistence", params)

        def compute():
            if target == "input":
                cloud = session.cloud
            elif target.startswith("embedding:"):
                emb_key = target.split(":", 1)[1]
                with session.lock:
                    emb = session.embeddings.get(emb_key)
                if emb is None:
                    raise ParameterError("unknown embedding hash %s" % emb_key)
                cloud = emb.as_cloud()
            else:
                raise ParameterError("target must be 'input' or 'embedding:{hash}'")
            if subsample and session.cloud.n > subsample:
                idx = maxmin_subsample(session.cloud, subsample, seed=seed)
            else:
                idx = list(range(session.cloud.n))
            dgs = persistence.vr_persistence(cloud.euclidean_distances(idx), max_dim=1)
            body = _diagram_body(dgs)
            body["hash"] = key
            body["betti1"] = persistence.persistent_betti(dgs[1]).__dict__
            return body

        return cached(session, key, compute)

    @app.get("/sessions/{session_id}/jobs/{job_id}")
    async def job_status(session_id: str, job_id: str):
        session = get_session(session_id)
        with session.lock:
            state = session.jobs.get(job_id)
        if state is None:
            raise HTTPException(status_code=404, detail="unknown job %s" % job_id)
        return state

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
