"""File formats: code JSON, request strings, and design/code serialization.

Code JSON is ``{"n": int, "m": int, "servers": [[int, ...], ...]}`` with
1-based item indices and one sorted array per server.  Writers emit keys
in a fixed order so equal inputs give byte-identical output.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .cwc import ConstantWeightCode
from .designs import SteinerSystem
from .errors import ParameterError
from .setsystem import McbcCode, MultisetRequest


class FormatError(ParameterError):
    """Input text does not match the expected format."""


def _positive_int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{what} must be an integer, got {value!r}")
    return value


def code_to_dict(code: McbcCode) -> dict:
    return {"n": code.n, "m": code.m, "servers": [list(s) for s in code.servers]}


def code_from_dict(data: Any) -> McbcCode:
    if not isinstance(data, dict):
        raise FormatError("code JSON must be an object")
    missing = {"n", "m", "servers"} - data.keys()
    if missing:
        raise FormatError(f"code JSON is missing {sorted(missing)}")
    n = _positive_int(data["n"], "n")
    m = _positive_int(data["m"], "m")
    servers = data["servers"]
    if not isinstance(servers, list) or not all(isinstance(s, list) for s in servers):
        raise FormatError("servers must be a list of lists")
    if len(servers) != m:
        raise FormatError(f"m={m} but {len(servers)} server arrays given")
    for s in servers:
        for item in s:
            _positive_int(item, "item index")
    return McbcCode.from_servers(n, servers)


def dumps_code(code: McbcCode) -> str:
    return json.dumps(code_to_dict(code)) + "\n"


def loads_code(text: str) -> McbcCode:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from exc
    return code_from_dict(data)


def read_code(path: str | Path) -> McbcCode:
    return loads_code(Path(path).read_text())


def write_code(code: McbcCode, path: str | Path) -> None:
    Path(path).write_text(dumps_code(code))


def parse_request(text: str) -> MultisetRequest:
    """Parse ``"3,3,4,4,5"``; blank text is the empty request."""
    text = text.strip()
    if not text:
        return MultisetRequest()
    items = []
    for part in text.split(","):
        part = part.strip()
        if not part.isdigit():
            raise FormatError(f"bad item {part!r} in request {text!r}")
        items.append(int(part))
    return MultisetRequest.from_items(items)


def format_request(req: MultisetRequest) -> str:
    return str(req)


def dumps_cwc(code: ConstantWeightCode) -> str:
    return json.dumps(code.to_dict()) + "\n"


def loads_cwc(text: str) -> ConstantWeightCode:
    d = json.loads(text)
    return ConstantWeightCode(
        d["length"], d["weight"], d["min_distance"], tuple(tuple(b) for b in d["blocks"])
    )


def dumps_steiner(s: SteinerSystem) -> str:
    return json.dumps(s.to_dict()) + "\n"


def loads_steiner(text: str) -> SteinerSystem:
    d = json.loads(text)
    return SteinerSystem(d["block_size"], d["points"], tuple(tuple(b) for b in d["blocks"]))
