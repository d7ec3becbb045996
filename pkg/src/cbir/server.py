"""HTTP query API over one immutable loaded index.

Responses are canonical JSON (sorted keys), so identical requests against the
same index produce byte-identical bodies. Errors carry an HTTP status plus a
``{code, message}`` body.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Request, Response, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware

from .color import ColorGroup
from .config import config_to_dict
from .errors import CbirError, DecodeError, UnsupportedFormatError
from .imaging import decode_image
from .retrieval import MODES, Index, RetrievalResult, query, query_by_id
from .texture import TextureClass

DEFAULT_MAX_UPLOAD = 16 * 1024 * 1024

_MEDIA_TYPES = {".png": "image/png", ".jpg": "image/jpeg", ".jpeg": "image/jpeg"}


def _json_response(payload: dict, status_code: int = 200) -> Response:
    return Response(
        content=json.dumps(payload, sort_keys=True) + "\n",
        status_code=status_code,
        media_type="application/json",
    )


def _error(status_code: int, code: str, message: str) -> Response:
    return _json_response({"code": code, "message": message}, status_code)


def _result_payload(result: RetrievalResult) -> dict:
    return {
        "results": [
            {"id": e.image_id, "distance": e.distance, "rank": e.rank}
            for e in result.entries
        ],
        "candidates_examined": result.candidates_examined,
        "mode": result.mode,
    }


def _parse_params(k_raw, mode_raw):
    try:
        k = int(k_raw)
    except (TypeError, ValueError):
        raise ValueError(f"k must be an integer, got {k_raw!r}") from None
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    mode = str(mode_raw)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return k, mode


def create_app(
    index: Index,
    images_dir: str | Path,
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD,
) -> FastAPI:
    app = FastAPI(title="cbir query API", docs_url=None, redoc_url=None)
    # the browser console may be served from any static origin
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"])
    images_root = Path(images_dir).resolve()

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return _error(400, "invalid-argument", "malformed request")

    @app.post("/api/query")
    async def post_query(request: Request, image: UploadFile | None = None):
        declared = request.headers.get("content-length")
        if declared and declared.isdigit() and int(declared) > max_upload_bytes + 4096:
            return _error(413, "oversized-upload",
                          f"upload exceeds the {max_upload_bytes} byte limit")
        if image is None:
            return _error(400, "invalid-argument", "multipart field 'image' is required")
        try:
            k, mode = _parse_params(request.query_params.get("k", "10"),
                                    request.query_params.get("mode", "clustered"))
        except ValueError as exc:
            return _error(400, "invalid-argument", str(exc))
        data = await image.read()
        if len(data) > max_upload_bytes:
            return _error(413, "oversized-upload",
                          f"upload exceeds the {max_upload_bytes} byte limit")
        try:
            raster = decode_image(data)
        except (DecodeError, UnsupportedFormatError) as exc:
            return _error(400, exc.code, str(exc))
        try:
            result = query(index, raster, k, mode)
        except CbirError as exc:
            return _error(400, exc.code, str(exc))
        return _json_response(_result_payload(result))

    @app.get("/api/query-by-id/{image_id:path}")
    async def get_query_by_id(image_id: str, request: Request):
        try:
            k, mode = _parse_params(request.query_params.get("k", "10"),
                                    request.query_params.get("mode", "clustered"))
        except ValueError as exc:
            return _error(400, "invalid-argument", str(exc))
        if index.entry(image_id) is None:
            return _error(404, "unknown-id", f"image id {image_id!r} is not in the index")
        result = query_by_id(index, image_id, k, mode)
        return _json_response(_result_payload(result))

    @app.get("/api/image/{image_id:path}")
    async def get_image(image_id: str):
        parts = Path(image_id).parts
        if Path(image_id).is_absolute() or ".." in parts or not image_id:
            return _error(400, "path-traversal", f"image id {image_id!r} is not allowed")
        candidate = (images_root / image_id).resolve()
        try:
            candidate.relative_to(images_root)
        except ValueError:
            return _error(400, "path-traversal", f"image id {image_id!r} escapes the image root")
        if not candidate.is_file():
            return _error(404, "unknown-id", f"no image file for id {image_id!r}")
        media_type = _MEDIA_TYPES.get(candidate.suffix.lower())
        if media_type is None:
            return _error(404, "unknown-id", f"id {image_id!r} is not a served image type")
        return Response(content=candidate.read_bytes(), media_type=media_type)

    @app.get("/api/stats")
    async def get_stats():
        groups = {g.value: 0 for g in ColorGroup}
        classes = {c.value: 0 for c in TextureClass}
        for entry in index.entries:
            groups[entry.color_group.value] += 1
            classes[entry.texture_class.value] += 1
        return _json_response(
            {
                "entries": len(index.entries),
                "groups": groups,
                "classes": classes,
                "config_echo": config_to_dict(index.config),
            }
        )

    return app
