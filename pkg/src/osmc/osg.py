"""Reading and writing ``.osg`` instance files.

An ``.osg`` file is UTF-8 JSON::

    {"n": 4,
     "rotations": [[1, 3], [2, 0], [3, 1], [0, 2]],
     "outer_face": [0, 1, 2, 3],
     "terminals": [0, 2]}

``rotations[v]`` lists the neighbors of ``v`` counterclockwise.  The writer
puts one rotation per line so that loader messages can point at the line of
the offending vertex.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from osmc.errors import InstanceError, OsgFormatError
from osmc.planar import OSInstance, validate_instance

REQUIRED_KEYS = ("n", "rotations", "outer_face", "terminals")


def dumps(inst: OSInstance) -> str:
    rot = inst.graph.rotations_as_vertices()
    lines = ["{", f'  "n": {inst.n},', '  "rotations": [']
    for v, r in enumerate(rot):
        sep = "," if v + 1 < len(rot) else ""
        lines.append(f"    {json.dumps(r)}{sep}")
    lines.append("  ],")
    lines.append(f'  "outer_face": {json.dumps(list(inst.S))},')
    lines.append(f'  "terminals": {json.dumps(list(inst.T))}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def save(inst: OSInstance, path) -> None:
    Path(path).write_text(dumps(inst), encoding="utf-8")


def _line_of(text: str, offset: int) -> int:
    return text.count("\n", 0, offset) + 1


def _rotation_lines(text: str) -> list[int]:
    """Line number of every entry of the ``rotations`` array."""
    m = re.search(r'"rotations"\s*:\s*\[', text)
    if not m:
        return []
    out = []
    depth = 1
    for pos in range(m.end(), len(text)):
        c = text[pos]
        if c == "[":
            if depth == 1:
                out.append(_line_of(text, pos))
            depth += 1
        elif c == "]":
            depth -= 1
            if depth == 0:
                break
    return out


def _key_line(text: str, key: str) -> int:
    m = re.search(rf'"{key}"\s*:', text)
    return _line_of(text, m.start()) if m else 1


def _anchor(text: str, source: str, message: str, rot_lines: list[int]) -> str:
    """Prefix ``message`` with ``source:line`` using the vertex it names."""
    line = None
    m = re.search(r"(?:rotation of|vertex|at vertex) (\d+)", message)
    if m and rot_lines:
        v = int(m.group(1))
        if v < len(rot_lines):
            line = rot_lines[v]
    if line is None:
        if "outer face" in message or "S " in message or "s_" in message or "k >=" in message:
            line = _key_line(text, "outer_face")
        elif "terminal" in message:
            line = _key_line(text, "terminals")
        elif "rotation" in message or "face" in message or "component" in message:
            line = _key_line(text, "rotations")
        else:
            line = 1
    return f"{source}:{line}: {message}"


def loads(text: str, source: str = "<osg>", name: str = "") -> OSInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OsgFormatError(f"{source}:{exc.lineno}: invalid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise OsgFormatError(f"{source}:1: top level must be a JSON object")
    for key in REQUIRED_KEYS:
        if key not in data:
            raise OsgFormatError(f"{source}:1: missing key {key!r}")
    n = data["n"]
    if not isinstance(n, int) or n < 0:
        raise OsgFormatError(f"{source}:{_key_line(text, 'n')}: n must be a non-negative integer")
    for key in ("rotations", "outer_face", "terminals"):
        if not isinstance(data[key], list):
            raise OsgFormatError(f"{source}:{_key_line(text, key)}: {key} must be a list")
    rotations = data["rotations"]
    rot_lines = _rotation_lines(text)
    for v, r in enumerate(rotations):
        if not isinstance(r, list) or not all(isinstance(u, int) and not isinstance(u, bool) for u in r):
            line = rot_lines[v] if v < len(rot_lines) else _key_line(text, "rotations")
            raise OsgFormatError(f"{source}:{line}: rotation of vertex {v} must be a list of ints")
    for key in ("outer_face", "terminals"):
        if not all(isinstance(u, int) and not isinstance(u, bool) for u in data[key]):
            raise OsgFormatError(f"{source}:{_key_line(text, key)}: {key} must contain ints")
    report = validate_instance(n, rotations, data["outer_face"], data["terminals"],
                               name=name or Path(source).stem)
    if not report.ok:
        first = report.problems[0]
        msg = "; ".join(_anchor(text, source, str(p), rot_lines) for p in report.problems[:5])
        raise type(first)(msg)
    return report.instance


def load(path) -> OSInstance:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise OsgFormatError(f"{path}: not UTF-8: {exc}") from None
    return loads(text, source=str(path), name=path.stem)


__all__ = ["dumps", "save", "loads", "load", "InstanceError"]
