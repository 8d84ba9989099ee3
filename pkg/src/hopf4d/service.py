"""Local scene service: POST /scene takes a build request and answers with a
canonical scene document, so viewers can drive the engine over HTTP."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .errors import Hopf4dError
from .scene import build_scene, write_scene


def create_app() -> FastAPI:
    app = FastAPI(title="hopf4d scene service")
    # the viewer is typically served from another origin (static files)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/scene")
    async def scene(request: Request) -> Response:
        try:
            body = await request.json()
        except Exception:
            return JSONResponse(
                {"error": "ParseError", "detail": "request body is not JSON"},
                status_code=422,
            )
        if not isinstance(body, dict):
            return JSONResponse(
                {"error": "BadRequest", "detail": "request body must be an object"},
                status_code=422,
            )
        try:
            doc = build_scene(body)
        except Hopf4dError as e:
            return JSONResponse(
                {"error": type(e).__name__, "detail": str(e)}, status_code=422
            )
        except (KeyError, TypeError, ValueError) as e:
            return JSONResponse(
                {"error": "BadRequest", "detail": str(e)}, status_code=422
            )
        # canonical bytes, exactly as write_scene produces them
        return Response(content=write_scene(doc), media_type="application/json")

    return app
