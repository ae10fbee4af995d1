"""Local HTTP endpoint feeding the pose viewer.

Read-only JSON over HTTP/1.1: /api/solve, /api/info, /api/sweep.  The
database and skeleton are loaded once at startup and never mutated, so
the threading server can answer concurrent requests without locks.
Binds localhost by default; this is a desk tool, not a deployment.
"""

from __future__ import annotations

from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from . import service, solver


class _ApiHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "scapula-ik"

    def log_message(self, fmt, *args):  # quiet by default
        if self.server.verbose:
            super().log_message(fmt, *args)

    def do_GET(self):
        url = urlparse(self.path)
        try:
            if url.path == "/api/solve":
                self._reply(200, self._solve(url))
            elif url.path == "/api/info":
                self._reply(200, service.info_response(self.server.db, self.server.skeleton))
            elif url.path == "/api/sweep":
                self._reply(200, self._sweep(url))
            else:
                self._reply(404, {"error": f"unknown path {url.path}"})
        except (ValueError, KeyError) as exc:
            self._reply(400, {"error": str(exc)})

    def _params(self, url):
        return {k: v[-1] for k, v in parse_qs(url.query).items()}

    def _common(self, params):
        method = params.get("method", solver.METHOD_SQUAD)
        clamp = params.get("clamp", solver.CLAMP_CLAMP)
        # Validate eagerly so bad values turn into 400s.
        solver.SolveOptions(method=method, clamp_policy=clamp)
        return method, clamp

    def _solve(self, url):
        params = self._params(url)
        try:
            theta = float(params["theta"])
            psi = float(params["psi"])
        except KeyError as exc:
            raise ValueError(f"missing query parameter {exc.args[0]!r}") from None
        except ValueError:
            raise ValueError("theta and psi must be numbers") from None
        method, clamp = self._common(params)
        return service.solve_response(
            self.server.db, self.server.skeleton, theta, psi, method, clamp
        )

    def _sweep(self, url):
        params = self._params(url)
        try:
            thetas = service.parse_range_spec(params["theta"])
            psis = service.parse_range_spec(params["psi"])
        except KeyError as exc:
            raise ValueError(f"missing query parameter {exc.args[0]!r}") from None
        method, clamp = self._common(params)
        samples, _ = service.run_sweep(self.server.db, thetas, psis, method, clamp)
        out = []
        for pose_in, pose in samples:
            applied, clamped = solver.clamp_input(pose_in, clamp)
            out.append(
                service.response_from_pose(
                    self.server.db, self.server.skeleton, applied, clamped, method, pose
                )
            )
        return out

    def _reply(self, status: int, payload):
        body = service.dumps_json(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        # The viewer is served from a separate static-file port.
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)


def make_server(db, skeleton, host: str = "127.0.0.1", port: int = 8765,
                verbose: bool = False) -> ThreadingHTTPServer:
    """Build (but do not start) the API server; port 0 picks a free port."""
    httpd = ThreadingHTTPServer((host, port), _ApiHandler)
    httpd.db = db
    httpd.skeleton = skeleton
    httpd.verbose = verbose
    return httpd
