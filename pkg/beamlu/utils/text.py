from __future__ import annotations

import re

_ws_re = re.compile(r"\s+", flags=re.UNICODE)
_split_re = re.compile(r"[;,]")


def norm_key(value: str) -> str:
    """
    Normalizes names written in experiment configs:
    - strip
    - collapse whitespace to '_'
    - lowercase
    """
    s = (value or "").strip()
    s = _ws_re.sub("_", s)
    return s.lower()


def split_items(value: str, *, semicolon_only: bool = False) -> list[str]:
    """Splits a config list on ';' (and ',' unless `semicolon_only`), dropping blanks."""
    parts = (value or "").split(";") if semicolon_only else _split_re.split(value or "")
    return [p.strip() for p in parts if p.strip()]
