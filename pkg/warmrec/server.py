"""HTTP service answering recommendation queries against a loaded model"""

import logging
from typing import Iterable, List

from flask import Flask, Response, jsonify, request

from .logparse import normalize_page
from .recommender import MODES, MODE_HYBRID, recommend_pages
from .validators import LogParseError

logger = logging.getLogger(__name__)


class BadQuery(ValueError):
    """Malformed recommendation query (answered with 400)"""
    pass


def parse_session_pages(raw: str) -> List[str]:
    """Comma-separated page list -> normalized pages (blank items dropped)"""
    return normalize_pages(raw.split(","))


def normalize_pages(items: Iterable[str]) -> List[str]:
    return [normalize_page(p) for p in items if p.strip()]


def _query_args(default_n: int):
    """
    Read pages, n and mode from a GET query string or a POST JSON body

    Raises:
        BadQuery: On a missing or malformed parameter
    """
    if request.method == "POST":
        body = request.get_json(silent=True)
        if not isinstance(body, dict):
            raise BadQuery("request body must be a JSON object")
        raw_pages = body.get("pages")
        if not isinstance(raw_pages, list) or not all(isinstance(p, str) for p in raw_pages):
            raise BadQuery("pages must be a JSON array of strings")
        raw_n = body.get("n", default_n)
        mode = body.get("mode", MODE_HYBRID)
    else:
        raw = request.args.get("pages")
        raw_pages = raw.split(",") if raw is not None else []
        raw_n = request.args.get("n", str(default_n))
        mode = request.args.get("mode", MODE_HYBRID)

    try:
        pages = normalize_pages(raw_pages)
    except LogParseError as e:
        raise BadQuery(str(e))
    if not pages:
        raise BadQuery("missing required parameter: pages")

    try:
        n = int(raw_n)
    except (TypeError, ValueError):
        raise BadQuery(f"n must be an integer, got {raw_n!r}")
    if n < 1:
        raise BadQuery(f"n must be positive, got {n}")

    if mode not in MODES:
        raise BadQuery(f"mode must be one of {', '.join(MODES)}")
    return pages, n, mode


def create_app(model) -> Flask:
    """
    Build the Flask app around an immutable model

    Routes:
        GET /recommend?pages=a,b,c&n=5[&mode=rules]
        POST /recommend  {"pages": ["a", "b"], "n": 5}
        GET /health
    """
    app = Flask("warmrec")

    @app.route("/health", methods=["GET"])
    def health():
        return jsonify({"status": "ok", **model.summary()})

    @app.route("/recommend", methods=["GET", "POST"])
    def recommend_endpoint():
        try:
            pages, n, mode = _query_args(model.config.top_n)
        except BadQuery as e:
            return jsonify({"error": str(e)}), 400

        result = recommend_pages(pages, model, n, mode)
        return Response(result.to_json(), mimetype="application/json")

    @app.errorhandler(500)
    def internal_error(error):
        logger.error("Request failed: %s", error)
        return jsonify({"error": "internal error"}), 500

    return app


def serve(model, host: str, port: int) -> None:
    """Run the threaded development server (blocking)"""
    app = create_app(model)
    logger.info("Serving %d rules on http://%s:%d", len(model.rules), host, port)
    app.run(host=host, port=port, threaded=True)
