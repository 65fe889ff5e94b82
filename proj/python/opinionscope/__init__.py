# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 OpinionScope Contributors
"""Python bindings for the opinion analytics core."""

import json as _json

from ._core import (
    Error,
    LoadError,
    ParameterError,
    box_stats,
    pagerank,
    ppr,
    split_sentences,
)
from . import _core

__all__ = [
    "ApiError",
    "Error",
    "LoadError",
    "ParameterError",
    "Pipeline",
    "Service",
    "box_stats",
    "evaluate",
    "pagerank",
    "ppr",
    "split_sentences",
]


class Pipeline:
    """Lexicons, gazetteer and optional models loaded from a key=value config file."""

    def __init__(self, config_path):
        self._native = _core.Pipeline(str(config_path))

    def classify(self, text):
        return _json.loads(self._native.classify(text))

    def tokens(self, text):
        return self._native.tokens(text)

    def regions(self, text):
        mentions, primary = self._native.regions(text)
        return {
            "mentions": [{"name": n, "province_code": c, "offset": o} for n, c, o in mentions],
            "primary": primary,
        }

    def keywords(self, text, k=5):
        return self._native.keywords(text, k)

    def abstract(self, text, n=2):
        return self._native.abstract(text, n)


class ApiError(Exception):
    def __init__(self, status, body):
        super().__init__(f"{status}: {body}")
        self.status = status
        self.body = body


class Service:
    """Document store plus the JSON API handlers, without the HTTP transport."""

    def __init__(self, pipeline, store_path=None, page_size=20):
        self._pipeline = pipeline
        path = None if store_path is None else str(store_path)
        self._native = _core.Service(pipeline._native, path, page_size)

    def __len__(self):
        return self._native.size()

    def ingest(self, lines):
        if not isinstance(lines, str):
            lines = "".join(_json.dumps(doc, ensure_ascii=False) + "\n" for doc in lines)
        return _json.loads(self._native.ingest(lines))

    def ingest_file(self, path):
        return _json.loads(self._native.ingest_file(str(path)))

    def _call(self, method, arg):
        status, body = method(arg)
        decoded = _json.loads(body)
        if status != 200:
            raise ApiError(status, decoded)
        return decoded

    def documents(self, **params):
        return self._call(self._native.documents, _params(params))

    def document(self, doc_id):
        return self._call(self._native.document, doc_id)

    def trends(self, **params):
        return self._call(self._native.trends, _params(params))

    def regions(self, **params):
        return self._call(self._native.regions, _params(params))

    def media_summary(self, **params):
        return self._call(self._native.media_summary, _params(params))


def evaluate(predicted, truth):
    """Precision, recall and F1 for the positive class."""
    return _json.loads(_core.evaluate(list(predicted), list(truth)))


def _params(params):
    return {k: str(v) for k, v in params.items() if v is not None}
