"""HTTP API over a generated dataset directory.

Serves scene/region inventory, per-region graph documents, and a
grounding endpoint that parses a statement, searches the graph, and on
a miss returns ranked alternative statements.  Intended for browser
clients, so CORS is wide open; the service itself is read-only.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .bench import load_dataset
from .graph import graph_to_dict
from .grounding import classify_existence, partial_matches
from .language import default_synonyms, render_query_text
from .parsing import ParseError, Parser, build_vocabulary
from .query import query_to_dict

MAX_ALTERNATIVES = 10


class GroundRequest(BaseModel):
    scene_id: str
    region_id: str
    statement: str


def create_app(data_dir: str | Path) -> FastAPI:
    manifest, graphs, _records = load_dataset(data_dir)
    synonyms = default_synonyms()
    labels = {n.label for g in graphs.values() for n in g.nodes.values()}
    parser = Parser(synonyms, build_vocabulary(extra_labels=labels))
    scenes = [{"scene_id": entry["scene_id"], "regions": list(entry["regions"])}
              for entry in manifest["scenes"]]

    app = FastAPI(title="refground")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def graph_for(scene_id: str, region_id: str):
        graph = graphs.get((scene_id, region_id))
        if graph is None:
            raise HTTPException(status_code=404,
                                detail=f"unknown scene/region {scene_id}/{region_id}")
        return graph

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/scenes")
    def list_scenes():
        return {"scenes": scenes}

    @app.get("/scenes/{scene_id}/regions/{region_id}/graph")
    def get_graph(scene_id: str, region_id: str):
        return graph_to_dict(graph_for(scene_id, region_id))

    @app.post("/ground")
    def ground(req: GroundRequest):
        graph = graph_for(req.scene_id, req.region_id)
        try:
            outcome = parser.parse(req.statement)
        except ParseError as exc:
            raise HTTPException(status_code=422, detail={
                "error": "parse",
                "message": str(exc),
                "diagnostics": list(exc.diagnostics),
            })
        query = outcome.query
        existence = classify_existence(graph, query)
        body = {
            "query": query_to_dict(query),
            "confidence": outcome.confidence,
            "diagnostics": list(outcome.diagnostics),
        }
        if existence.exists:
            match = existence.match
            body.update({
                "exists": True,
                "object_id": match.bindings[0],
                "bindings": {str(slot): oid for slot, oid in sorted(match.bindings.items())},
            })
            return body
        candidates = partial_matches(graph, query)[:MAX_ALTERNATIVES]
        body.update({
            "exists": False,
            "alternatives": [{
                "statement": render_query_text(c.query, synonyms, 0),
                "object_id": c.target_node,
                "score": c.score.value,
                "query": query_to_dict(c.query),
            } for c in candidates],
        })
        return body

    return app
