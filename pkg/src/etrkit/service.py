"""HTTP front door: per-request entity typing and query parsing.

All resources are loaded at startup (no lazy loading) so the latency of a
warm /classify request reflects pure feature extraction plus prediction.
Shared pipeline state is immutable after startup.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .errors import ConfigError
from .pipeline import Pipeline


class ClassifyRequest(BaseModel):
    entity: str


class ParseRequest(BaseModel):
    query: str


def create_app(pipeline: Pipeline | None) -> FastAPI:
    app = FastAPI(title="etrkit", docs_url=None, redoc_url=None)
    app.state.pipeline = pipeline
    version = pipeline.version if pipeline is not None else None

    def _pipeline() -> Pipeline:
        if app.state.pipeline is None:
            raise HTTPException(status_code=503, detail="pipeline not initialized")
        return app.state.pipeline

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "model_version": version}

    @app.post("/classify")
    def classify(req: ClassifyRequest):
        pipe = _pipeline()
        if not req.entity.strip():
            raise HTTPException(status_code=400, detail="entity must be non-empty")
        try:
            label, scores = pipe.classify(req.entity)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {
            "entity": req.entity,
            "category": label,
            "scores": scores,
            "model_version": version,
        }

    @app.post("/parse")
    def parse(req: ParseRequest):
        pipe = _pipeline()
        if not req.query.strip():
            raise HTTPException(status_code=400, detail="query must be non-empty")
        try:
            segments = pipe.parse(req.query)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except ConfigError as exc:
            raise HTTPException(status_code=503, detail=str(exc)) from exc
        return {"segments": segments, "model_version": version}

    return app


def serve(pipeline: Pipeline, port: int = 8080, host: str = "127.0.0.1") -> None:
    """Run the service with uvicorn (blocking)."""
    import uvicorn

    uvicorn.run(create_app(pipeline), host=host, port=port, log_level="warning")
