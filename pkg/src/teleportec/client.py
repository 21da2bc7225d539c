"""Client for the service API: remote over HTTP, or in-process by
mounting the ASGI app directly (no server required).

The CLI goes through this layer for everything, so local runs and runs
against a deployed service share one code path and one wire format.
"""
from __future__ import annotations

import asyncio
from typing import Any

import httpx


class ServiceError(RuntimeError):
    """Non-2xx API response; carries the typed error detail when present."""

    def __init__(self, status_code: int, detail: Any):
        self.status_code = status_code
        self.detail = detail
        kind = detail.get("kind") if isinstance(detail, dict) else None
        self.kind = kind or ("config" if status_code in (400, 422) else "other")
        message = detail.get("message") if isinstance(detail, dict) else str(detail)
        super().__init__(f"{self.kind}: {message}")


class ServiceClient:
    """Thin POST/GET wrapper; `base_url=None` runs the app in-process."""

    def __init__(self, base_url: str | None = None, timeout: float | None = None):
        self._base_url = base_url
        self._timeout = timeout

    def _request(self, method: str, path: str, json_body: dict | None = None) -> Any:
        if self._base_url is not None:
            with httpx.Client(base_url=self._base_url, timeout=self._timeout) as client:
                resp = client.request(method, path, json=json_body)
        else:
            from .service import create_app

            async def run():
                transport = httpx.ASGITransport(app=create_app())
                async with httpx.AsyncClient(
                    transport=transport, base_url="http://teleportec.local", timeout=None
                ) as client:
                    return await client.request(method, path, json=json_body)

            resp = asyncio.run(run())
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail")
            except ValueError:
                detail = resp.text
            raise ServiceError(resp.status_code, detail)
        return resp.json()

    def health(self) -> dict:
        return self._request("GET", "/health")

    def check_code(self, code: dict, seed: int = 0) -> dict:
        return self._request("POST", "/codes/check", {"code": code, "seed": seed})

    def sweep(self, **config) -> dict:
        return self._request("POST", "/sweeps", config)

    def teleport_demo(self, **config) -> dict:
        return self._request("POST", "/teleport/demo", config)

    def curve(self, model: str, resolution: int) -> dict:
        return self._request("POST", "/curves", {"model": model, "resolution": resolution})
