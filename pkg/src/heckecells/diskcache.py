"""Advisory JSON cache for computed tables.

Files are versioned; a missing file, unreadable JSON, or a format/type
mismatch silently falls back to recomputation (the cache can never change
results, only timings, and byte-identical outputs are preserved because the
stored payloads are the canonical serializations themselves).
"""

from __future__ import annotations

import json
import os

FORMAT_VERSION = 1


def cache_path(cache_dir: str, type_str: str, kind: str) -> str:
    return os.path.join(cache_dir, f"{type_str}.{kind}.json")


def load_payload(cache_dir, type_str: str, kind: str):
    """Return the cached payload dict, or None when unusable."""
    if not cache_dir:
        return None
    path = cache_path(cache_dir, type_str, kind)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, ValueError):
        return None
    if (
        not isinstance(doc, dict)
        or doc.get("format_version") != FORMAT_VERSION
        or doc.get("coxeter_type") != type_str
        or doc.get("payload_kind") != kind
    ):
        return None
    return doc.get("payload")


def store_payload(cache_dir, type_str: str, kind: str, payload) -> None:
    if not cache_dir:
        return
    os.makedirs(cache_dir, exist_ok=True)
    doc = {
        "format_version": FORMAT_VERSION,
        "coxeter_type": type_str,
        "payload_kind": kind,
        "payload": payload,
    }
    path = cache_path(cache_dir, type_str, kind)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
    os.replace(tmp, path)
