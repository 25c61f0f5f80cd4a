"""Clients for optional external language services.

Two endpoints mirror the pipeline's LLM roles: a statement parser primed
with five committed few-shot exemplars, and a multiple-choice selector
for alternative suggestions.  Both are strictly optional: configuration
comes from environment variables, every failure raises a distinct,
catchable error, and nothing in the offline pipeline requires them.
"""

from __future__ import annotations

import json
import os
import threading
from importlib import resources
from pathlib import Path

import httpx

from .query import QueryError, SubgraphQuery, query_from_dict

PARSER_URL_ENV = "REFGROUND_PARSER_URL"
PARSER_KEY_ENV = "REFGROUND_PARSER_KEY"
MCQA_URL_ENV = "REFGROUND_MCQA_URL"

DEFAULT_TIMEOUT = 30.0
DEFAULT_MAX_IN_FLIGHT = 4


class ExternalServiceError(Exception):
    """Base for all external-endpoint failures; callers may fall back."""


class ExternalTransportError(ExternalServiceError):
    """Endpoint unreachable or returned a non-success status."""


class ExternalTimeoutError(ExternalServiceError):
    """No response within the configured timeout."""


class ResponseSchemaError(ExternalServiceError):
    """Endpoint answered, but not with the expected document shape."""


def load_few_shot_examples(path: str | Path | None = None) -> list[dict]:
    """The committed training exemplars sent with every parse request."""
    if path is None:
        text = resources.files("refground.data").joinpath("few_shot.json").read_text()
    else:
        text = Path(path).read_text()
    examples = json.loads(text)
    if not isinstance(examples, list) or not examples:
        raise ValueError("few-shot file must hold a non-empty list")
    for ex in examples:
        if "statement" not in ex or "query" not in ex:
            raise ValueError("each few-shot example needs 'statement' and 'query'")
        query_from_dict(ex["query"])  # must themselves be valid
    return examples


class _BaseClient:
    def __init__(self, url: str, api_key: str | None = None,
                 timeout: float = DEFAULT_TIMEOUT, transport=None,
                 max_in_flight: int = DEFAULT_MAX_IN_FLIGHT):
        if not url:
            raise ValueError("external endpoint URL is required")
        self.url = url
        self.api_key = api_key
        self._sem = threading.Semaphore(max_in_flight)
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def _post(self, payload: dict) -> dict:
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        with self._sem:
            try:
                response = self._client.post(self.url, json=payload, headers=headers)
            except httpx.TimeoutException as exc:
                raise ExternalTimeoutError(str(exc)) from exc
            except httpx.HTTPError as exc:
                raise ExternalTransportError(str(exc)) from exc
        if response.status_code != 200:
            raise ExternalTransportError(f"endpoint returned status {response.status_code}")
        try:
            doc = response.json()
        except ValueError as exc:
            raise ResponseSchemaError(f"response is not JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ResponseSchemaError("response must be a JSON object")
        return doc

    def close(self) -> None:
        self._client.close()


class ExternalParserClient(_BaseClient):
    """Few-shot statement parser endpoint."""

    def __init__(self, url: str | None = None, api_key: str | None = None,
                 few_shot: list[dict] | None = None, **kwargs):
        super().__init__(url=url or os.environ.get(PARSER_URL_ENV, ""),
                         api_key=api_key or os.environ.get(PARSER_KEY_ENV), **kwargs)
        self.few_shot = few_shot if few_shot is not None else load_few_shot_examples()

    @classmethod
    def from_env(cls, **kwargs) -> "ExternalParserClient | None":
        """Configured client, or None when the environment has no endpoint."""
        if not os.environ.get(PARSER_URL_ENV):
            return None
        return cls(**kwargs)

    def parse(self, text: str) -> SubgraphQuery:
        doc = self._post({"statement": text, "examples": self.few_shot})
        try:
            return query_from_dict(doc)
        except QueryError as exc:
            raise ResponseSchemaError(f"response is not a valid query: {exc}") from exc


class McqaClient(_BaseClient):
    """Multiple-choice selector for alternative statements."""

    def __init__(self, url: str | None = None, **kwargs):
        super().__init__(url=url or os.environ.get(MCQA_URL_ENV, ""), **kwargs)

    @classmethod
    def from_env(cls, **kwargs) -> "McqaClient | None":
        if not os.environ.get(MCQA_URL_ENV):
            return None
        return cls(**kwargs)

    def choose(self, statement: str, choices: list[str]) -> int:
        """Index of the chosen alternative statement."""
        if not choices:
            raise ValueError("choices must be non-empty")
        doc = self._post({"statement": statement, "choices": list(choices)})
        picked = doc.get("choice")
        if not isinstance(picked, int) or isinstance(picked, bool) \
                or not 0 <= picked < len(choices):
            raise ResponseSchemaError(f"choice must be an index into {len(choices)} choices")
        return picked


def external_parse(client: ExternalParserClient, text: str) -> SubgraphQuery:
    """Functional form of ExternalParserClient.parse."""
    return client.parse(text)
