"""Edge-list text format: one ``i j`` pair per line, 1-based.

Lines starting with ``#`` are comments.  The writer records the vertex
count as ``# n=<count>`` so isolated trailing vertices survive a round
trip; the reader honors it when ``n`` is not given.
"""

import io

from .errors import ValidationError
from .graph import from_edge_list


def format_edge_list(g, header=None):
    out = io.StringIO()
    for key, val in (header or {}).items():
        out.write(f"# {key}={val}\n")
    out.write(f"# n={g.n}\n")
    for i, j in g.edges():
        out.write(f"{i} {j}\n")
    return out.getvalue()


def parse_edge_list(text, n=None):
    edges = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, val = line[1:].strip().partition("=")
            if sep and key.strip() == "n":
                declared = int(val)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(f"line {lineno}: expected 'i j', got {raw!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ValidationError(f"line {lineno}: non-integer vertex in {raw!r}") from exc
    if n is None:
        n = declared
    if n is None:
        n = max((max(e) for e in edges), default=0)
    return from_edge_list(n, edges)


def read_edge_list(path, n=None):
    with open(path) as fh:
        return parse_edge_list(fh.read(), n)


def write_edge_list(g, path, header=None):
    with open(path, "w", newline="\n") as fh:
        fh.write(format_edge_list(g, header))
