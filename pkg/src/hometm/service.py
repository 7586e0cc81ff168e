"""Localhost HTTP service: the scoring API plus the static browser UI.

Privacy posture, in order of importance:

* binds loopback only, unless explicitly overridden with --allow-external;
* never makes an outbound connection, everything is computed locally;
* request logs carry method, path without query string, and status, and
  nothing else, so device selections never end up on disk;
* responses carry Cache-Control: no-store and no CORS headers, keeping the
  API same-origin with the served UI;
* model responses are never timestamped, so identical inputs produce
  byte-identical bodies across requests, threads and restarts.
"""

from __future__ import annotations

import argparse
import ipaddress
import json
import mimetypes
import pathlib
import sys
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import unquote

from .catalog import Catalog, CatalogError, load_catalog
from .cvss import canonical_string
from .engine import ModelInput, score_model
from .report import render

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 7707
MAX_BODY_BYTES = 64 * 1024
_DRAIN_LIMIT = 1024 * 1024

_MODEL_KEYS = {"devices", "risk_factors", "connections", "display_name"}

_FALLBACK_PAGE = """<!doctype html>
<html lang="en">
<head><meta charset="utf-8"><title>Home threat modelling</title></head>
<body style="font-family: sans-serif; max-width: 40em; margin: 3em auto;">
<h1>Home threat modelling</h1>
<p>The service is running, but the browser UI has not been built yet.</p>
<p>To build it, run <code>npm install</code> and <code>npm run build</code>
inside the <code>frontend/</code> directory, then restart the service or
point it at the build with <code>--ui-dir</code>.</p>
<p>The API is available either way:</p>
<ul>
<li><code>GET /api/health</code></li>
<li><code>GET /api/catalog</code></li>
<li><code>GET /api/glossary</code></li>
<li><code>POST /api/model</code></li>
</ul>
</body>
</html>
"""


def _catalog_payload(catalog: Catalog) -> dict:
    """Everything the browser UI needs to run the wizard, in one document."""
    return {
        "schema_version": catalog.schema_version,
        "devices": [
            {
                "id": d.id,
                "label": d.label,
                "categories": sorted(d.categories),
            }
            for d in catalog.devices.values()
        ],
        "categories": [
            {
                "id": c.id,
                "description": c.description,
                "threat_ids": sorted(c.threat_ids),
                "lindunn_factors": list(c.lindunn_factors),
                "bonus": c.bonus,
            }
            for c in catalog.categories.values()
        ],
        "risk_factors": [
            {
                "id": f.id,
                "weight": f.weight,
                "question_text": f.question_text,
                "justification": f.justification,
                "related_threats": sorted(f.related_threats),
                "off_reductions": sorted(f.off_reductions),
            }
            for f in catalog.risk_factors.values()
        ],
        "threats": [
            {
                "id": t.id,
                "stride": t.stride,
                "short_name": t.short_name,
                "description": t.description,
                "mitigation": t.mitigation,
                "vector": canonical_string(t.vector),
                "scores": {
                    "base": t.scores.base,
                    "temporal": t.scores.temporal,
                    "environmental": t.scores.environmental,
                },
            }
            for t in catalog.threats.values()
        ],
        "glossary": dict(catalog.glossary),
        "guidance_links": {
            device_id: [{"label": l.label, "url": l.url} for l in links]
            for device_id, links in catalog.guidance_links.items()
        },
    }


def _validate_model_body(doc, catalog: Catalog) -> tuple[dict, ModelInput | None]:
    """Field-level validation; returns (errors, model)."""
    errors: dict[str, list[str]] = {}
    if not isinstance(doc, dict):
        return {"body": ["must be a JSON object"]}, None

    def note(field: str, message: str) -> None:
        errors.setdefault(field, []).append(message)

    for key in doc:
        if key not in _MODEL_KEYS:
            note("body", f"unknown key {key!r}")

    devices = doc.get("devices", [])
    if not isinstance(devices, list) or any(
        not isinstance(d, str) for d in devices
    ):
        note("devices", "must be a list of device ids")
        devices = []
    else:
        for did in devices:
            if did not in catalog.devices:
                note("devices", f"unknown device id {did!r}")

    factors = doc.get("risk_factors", [])
    if not isinstance(factors, list) or any(
        not isinstance(f, str) for f in factors
    ):
        note("risk_factors", "must be a list of risk factor ids")
        factors = []
    else:
        for rid in factors:
            if rid not in catalog.risk_factors:
                note("risk_factors", f"unknown risk factor id {rid!r}")

    connections = doc.get("connections", [])
    pairs: list[tuple[str, str]] = []
    if not isinstance(connections, list):
        note("connections", "must be a list of [device-id, device-id] pairs")
    else:
        for item in connections:
            if (not isinstance(item, list) or len(item) != 2
                    or not all(isinstance(x, str) for x in item)):
                note("connections",
                     "each connection must be a [device-id, device-id] pair")
                continue
            a, b = item
            for end in (a, b):
                if end not in devices:
                    note("connections",
                         f"connection endpoint {end!r} is not a selected "
                         "device")
            pairs.append((a, b))

    display_name = doc.get("display_name")
    if display_name is not None and not isinstance(display_name, str):
        note("display_name", "must be a string or null")
        display_name = None

    if errors:
        return errors, None
    model = ModelInput(
        devices=frozenset(devices),
        risk_factors=frozenset(factors),
        connections=tuple(pairs),
        display_name=display_name,
    )
    return {}, model


class Handler(BaseHTTPRequestHandler):
    server_version = "hometm"
    sys_version = ""
    protocol_version = "HTTP/1.1"

    # -- logging: method, bare path, status; nothing that identifies a home

    def log_request(self, code="-", size="-"):
        if isinstance(code, HTTPStatus):
            code = code.value
        path = getattr(self, "path", "") or ""
        path = path.split("?", 1)[0]
        command = getattr(self, "command", "") or "-"
        stream = getattr(self.server, "log_stream", sys.stderr)
        stream.write(f"{command} {path} {code}\n")

    def log_error(self, format, *args):
        pass

    def log_message(self, format, *args):
        pass

    # -- plumbing

    def _send(self, status: int, body: bytes, content_type: str,
              close: bool = False) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Cache-Control", "no-store")
        if close:
            self.send_header("Connection", "close")
            self.close_connection = True
        self.end_headers()
        if getattr(self, "command", None) != "HEAD":
            self.wfile.write(body)

    def send_error(self, code, message=None, explain=None):
        # the default handler answers unsupported methods with an HTML page
        # and no cache headers; keep every response JSON and no-store
        if isinstance(code, HTTPStatus):
            code = code.value
        try:
            phrase = HTTPStatus(code).phrase
        except ValueError:
            phrase = "error"
        body = json.dumps({"error": message or phrase}).encode("utf-8")
        self._send(code, body, "application/json; charset=utf-8", close=True)

    def _json(self, status: int, payload) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self._send(status, body, "application/json; charset=utf-8")

    def _raw_json(self, status: int, body: bytes) -> None:
        self._send(status, body, "application/json; charset=utf-8")

    # -- routing

    def do_GET(self):
        path = unquote(self.path.split("?", 1)[0])
        if path == "/api/health":
            self._raw_json(200, self.server.health_body)
        elif path == "/api/catalog":
            self._raw_json(200, self.server.catalog_body)
        elif path == "/api/glossary":
            self._raw_json(200, self.server.glossary_body)
        elif path.startswith("/api/"):
            self._json(404, {"error": "no such endpoint"})
        else:
            self._static(path)

    do_HEAD = do_GET

    def do_POST(self):
        path = unquote(self.path.split("?", 1)[0])
        if path != "/api/model":
            self._json(404, {"error": "no such endpoint"})
            return
        try:
            length = int(self.headers.get("Content-Length") or 0)
        except ValueError:
            self._json(400, {"error": "bad Content-Length"})
            return
        if length > MAX_BODY_BYTES:
            self._drain(length)
            self._json(413, {
                "error": f"request body over {MAX_BODY_BYTES} bytes",
            })
            return
        raw = self.rfile.read(length)
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError:
            self._json(400, {"error": "body is not valid JSON"})
            return
        errors, model = _validate_model_body(doc, self.server.catalog)
        if errors:
            self._json(422, {"errors": errors})
            return
        report = score_model(model, self.server.catalog)
        body = render(report, "machine", self.server.catalog).body
        self._send(200, body.encode("utf-8"),
                   "application/json; charset=utf-8")

    def _drain(self, length: int) -> None:
        remaining = min(length, _DRAIN_LIMIT)
        while remaining > 0:
            chunk = self.rfile.read(min(remaining, 16 * 1024))
            if not chunk:
                break
            remaining -= len(chunk)
        if length > _DRAIN_LIMIT:
            self.close_connection = True

    # -- static UI

    def _static(self, path: str) -> None:
        ui_dir = self.server.ui_dir
        if path == "/":
            path = "/index.html"
        if ui_dir is None or not ui_dir.is_dir():
            if path == "/index.html":
                self._send(200, _FALLBACK_PAGE.encode("utf-8"),
                           "text/html; charset=utf-8")
            else:
                self._json(404, {"error": "not found"})
            return
        root = ui_dir.resolve()
        candidate = (root / path.lstrip("/")).resolve()
        inside = candidate == root or root in candidate.parents
        if not inside or not candidate.is_file():
            self._json(404, {"error": "not found"})
            return
        content_type = (mimetypes.guess_type(candidate.name)[0]
                        or "application/octet-stream")
        if content_type.startswith("text/") or content_type in (
            "application/javascript", "application/json",
        ):
            content_type += "; charset=utf-8"
        self._send(200, candidate.read_bytes(), content_type)


def _is_loopback(host: str) -> bool:
    if host == "localhost":
        return True
    try:
        return ipaddress.ip_address(host).is_loopback
    except ValueError:
        return False


def _default_ui_dir() -> pathlib.Path | None:
    candidate = (pathlib.Path(__file__).resolve().parents[2]
                 / "frontend" / "dist")
    return candidate if candidate.is_dir() else None


def create_server(host: str = DEFAULT_HOST, port: int = DEFAULT_PORT,
                  catalog: Catalog | None = None,
                  ui_dir: pathlib.Path | str | None = None,
                  allow_external: bool = False,
                  log_stream=None) -> ThreadingHTTPServer:
    """Build a ready-to-serve HTTP server; callers own serve/shutdown."""
    if not allow_external and not _is_loopback(host):
        raise ValueError(
            f"refusing to bind non-loopback host {host!r}; "
            "pass allow_external to override"
        )
    if catalog is None:
        catalog = load_catalog()
    server = ThreadingHTTPServer((host, port), Handler)
    server.catalog = catalog
    server.catalog_body = json.dumps(
        _catalog_payload(catalog), ensure_ascii=False
    ).encode("utf-8")
    server.glossary_body = json.dumps(
        dict(catalog.glossary), ensure_ascii=False
    ).encode("utf-8")
    server.health_body = json.dumps(
        {"status": "ok", "schema_version": catalog.schema_version}
    ).encode("utf-8")
    if ui_dir is None:
        server.ui_dir = _default_ui_dir()
    else:
        server.ui_dir = pathlib.Path(ui_dir)
    server.log_stream = log_stream if log_stream is not None else sys.stderr
    return server


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hometm-serve",
        description="Serve the home threat modelling API and UI on loopback.",
    )
    parser.add_argument("--host", default=DEFAULT_HOST)
    parser.add_argument("--port", type=int, default=DEFAULT_PORT)
    parser.add_argument("--catalog", help="path to an alternative catalog")
    parser.add_argument("--ui-dir", dest="ui_dir",
                        help="directory with the built browser UI")
    parser.add_argument("--allow-external", action="store_true",
                        help="permit binding a non-loopback address")
    args = parser.parse_args(argv)
    try:
        catalog = load_catalog(args.catalog)
    except (CatalogError, OSError) as exc:
        message = str(exc).splitlines()[0] if str(exc) else repr(exc)
        print(f"error: {message}", file=sys.stderr)
        return 2
    try:
        server = create_server(args.host, args.port, catalog=catalog,
                               ui_dir=args.ui_dir,
                               allow_external=args.allow_external)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}/ (Ctrl+C to stop)",
          file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
