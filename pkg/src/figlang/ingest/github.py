"""GitHub REST v3 comment fetching with pagination, retry, and replay.

The HTTP layer is a pluggable transport so recorded fixtures can replay
offline; the real transport authenticates with the GH_TOKEN environment
variable.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional

import requests

logger = logging.getLogger("figlang.ingest")

GH_TOKEN_VAR = "GH_TOKEN"
KINDS = ("issue", "pull_request")

# transport(method, url, params, headers) -> (status_code, headers, parsed_body)
Transport = Callable[[str, str, dict, dict], tuple[int, dict, object]]


class IngestError(RuntimeError):
    pass


class AuthenticationError(IngestError):
    pass


class UnknownRepoError(IngestError):
    pass


@dataclass
class RawComment:
    repo_slug: str
    kind: str
    comment_id: str
    author: str
    created_at: datetime
    body: str

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown comment kind {self.kind!r}")
        if not self.body.strip():
            raise ValueError("comment body is empty after trimming")

    def to_dict(self) -> dict:
        return {
            "repo_slug": self.repo_slug,
            "kind": self.kind,
            "comment_id": self.comment_id,
            "author": self.author,
            "created_at": self.created_at.isoformat(),
            "body": self.body,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RawComment":
        return cls(
            repo_slug=data["repo_slug"],
            kind=data["kind"],
            comment_id=str(data["comment_id"]),
            author=data["author"],
            created_at=parse_timestamp(data["created_at"]),
            body=data["body"],
        )


@dataclass
class FetchResult:
    comments: list[RawComment]
    partial: bool = False
    reason: str = ""


def parse_timestamp(value: str) -> datetime:
    ts = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def requests_transport(token: str) -> Transport:
    session = requests.Session()

    def call(method: str, url: str, params: dict, headers: dict) -> tuple[int, dict, object]:
        merged = {
            "Authorization": f"Bearer {token}",
            "Accept": "application/vnd.github+json",
            **headers,
        }
        response = session.request(method, url, params=params, headers=merged, timeout=30)
        try:
            body = response.json()
        except ValueError:
            body = None
        return response.status_code, dict(response.headers), body

    return call


class ReplayTransport:
    """Serves recorded responses in request order; asserts path agreement."""

    def __init__(self, fixture_path: str | Path) -> None:
        with open(fixture_path, encoding="utf-8") as handle:
            self.recorded = json.load(handle)
        self.cursor = 0

    def __call__(self, method: str, url: str, params: dict, headers: dict) -> tuple[int, dict, object]:
        if self.cursor >= len(self.recorded):
            return 200, {}, []
        entry = self.recorded[self.cursor]
        self.cursor += 1
        if entry.get("path") and entry["path"] not in url:
            raise IngestError(f"replay mismatch: expected {entry['path']}, requested {url}")
        return entry.get("status", 200), entry.get("headers", {}), entry.get("body", [])


class GithubCommentClient:
    """Fetches issue or pull-request review comments for one repository."""

    def __init__(
        self,
        token: Optional[str] = None,
        transport: Optional[Transport] = None,
        base_url: str = "https://api.github.com",
        page_size: int = 100,
        max_retries: int = 3,
        backoff_s: float = 1.0,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        if transport is None:
            token = token or os.environ.get(GH_TOKEN_VAR)
            if not token:
                raise AuthenticationError(f"set {GH_TOKEN_VAR} or pass an explicit token")
            transport = requests_transport(token)
        self.transport = transport
        self.base_url = base_url.rstrip("/")
        self.page_size = page_size
        self.max_retries = max_retries
        self.backoff_s = backoff_s
        self.sleep = sleep

    def _endpoint(self, repo_slug: str, kind: str) -> str:
        if kind == "issue":
            return f"{self.base_url}/repos/{repo_slug}/issues/comments"
        return f"{self.base_url}/repos/{repo_slug}/pulls/comments"

    def _request_page(self, url: str, params: dict) -> object:
        attempt = 0
        while True:
            status, headers, body = self.transport("GET", url, params, {})
            if status == 401:
                raise AuthenticationError("GitHub API rejected the credential (401)")
            if status == 404:
                raise UnknownRepoError(f"repository not found: {url}")
            if status == 403 and headers.get("X-RateLimit-Remaining") == "0" or status == 429:
                if attempt >= self.max_retries:
                    raise _RateLimited()
                wait = self.backoff_s * (2**attempt)
                logger.warning("rate limited; backing off %.1fs", wait)
                self.sleep(wait)
                attempt += 1
                continue
            if status != 200:
                raise IngestError(f"unexpected API status {status} for {url}")
            return body

    def fetch_comments(
        self,
        repo_slug: str,
        window: tuple[Optional[datetime], Optional[datetime]] = (None, None),
        kind: str = "issue",
        limit: int = 1000,
        store_path: Optional[str | Path] = None,
    ) -> FetchResult:
        """Fetch up to ``limit`` comments of one kind within the window.

        Pagination is internal; rate-limit exhaustion after backoff retries
        returns the partial results with the partial flag set. When
        ``store_path`` is given, fetched comments are appended there as
        JSONL.
        """
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if limit < 0:
            raise ValueError("limit must be >= 0")
        since, until = window
        comments: list[RawComment] = []
        seen_ids: set[str] = set()
        partial = False
        reason = ""
        page = 1
        url = self._endpoint(repo_slug, kind)
        while len(comments) < limit:
            params: dict = {"per_page": self.page_size, "page": page, "sort": "created"}
            if since is not None:
                params["since"] = since.isoformat()
            try:
                body = self._request_page(url, params)
            except _RateLimited:
                partial = True
                reason = "rate limit exhausted after retries"
                logger.error("fetch of %s %s comments incomplete: %s", repo_slug, kind, reason)
                break
            if not isinstance(body, list) or not body:
                break
            for item in body:
                created = parse_timestamp(item["created_at"])
                if since is not None and created < since:
                    continue
                if until is not None and created > until:
                    continue
                comment_id = str(item["id"])
                if comment_id in seen_ids:
                    continue
                body_text = (item.get("body") or "").strip()
                if not body_text:
                    continue
                seen_ids.add(comment_id)
                comments.append(
                    RawComment(
                        repo_slug=repo_slug,
                        kind=kind,
                        comment_id=comment_id,
                        author=(item.get("user") or {}).get("login", ""),
                        created_at=created,
                        body=item["body"],
                    )
                )
                if len(comments) >= limit:
                    break
            if len(body) < self.page_size:
                break
            page += 1
        if store_path is not None:
            write_comment_store(comments, store_path)
        return FetchResult(comments=comments, partial=partial, reason=reason)


class _RateLimited(Exception):
    pass


def write_comment_store(comments: list[RawComment], path: str | Path, append: bool = False) -> None:
    mode = "a" if append else "w"
    with open(path, mode, encoding="utf-8") as handle:
        for comment in comments:
            handle.write(json.dumps(comment.to_dict(), sort_keys=True, ensure_ascii=False))
            handle.write("\n")


def read_comment_store(path: str | Path) -> list[RawComment]:
    comments = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                comments.append(RawComment.from_dict(json.loads(line)))
    return comments
