"""Plain-text file formats for graphs, charge lists, and partitions.

Graph format: first non-comment line is "n m", followed by m lines "u v w"
with 0-based node ids and a positive decimal weight. Lines starting with "#"
and blank lines are ignored. Charge files are whitespace-separated node ids.
Partition files carry one fragment id per line, line i belonging to node i.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .graph import GraphFormatError, Partition, ProteinGraph


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append((number, line))
    return out


def parse_graph(text: str) -> ProteinGraph:
    """Parse the graph format; zero-weight edges are dropped.

    Raises GraphFormatError (with the offending line number) on malformed
    lines, duplicate edges, self-loops, out-of-range ids, or negative weights.
    """
    lines = _content_lines(text)
    if not lines:
        raise GraphFormatError("empty graph file")
    header_no, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise GraphFormatError(f"line {header_no}: expected header 'n m'")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError(f"line {header_no}: expected integers in header") from None
    if n < 1 or m < 0:
        raise GraphFormatError(f"line {header_no}: invalid header n={n}, m={m}")
    if len(lines) - 1 != m:
        raise GraphFormatError(
            f"header announces {m} edges but file has {len(lines) - 1} edge lines"
        )

    edges = []
    for number, line in lines[1:]:
        fields = line.split()
        if len(fields) != 3:
            raise GraphFormatError(f"line {number}: expected 'u v w'")
        try:
            u, v, w = int(fields[0]), int(fields[1]), float(fields[2])
        except ValueError:
            raise GraphFormatError(f"line {number}: malformed edge '{line}'") from None
        if w == 0:
            continue  # cannot affect any cut
        edges.append((u, v, w))
    try:
        return ProteinGraph.from_edges(n, edges)
    except GraphFormatError as exc:
        raise GraphFormatError(str(exc)) from None


def write_graph(g: ProteinGraph) -> str:
    lines = [f"{g.node_count} {g.edge_count}"]
    for u, v, w in g.edges:
        lines.append(f"{u} {v} {w!r}")
    return "\n".join(lines) + "\n"


def parse_charges(text: str, n: int) -> list[bool]:
    """Whitespace-separated charged node ids to per-node flags."""
    flags = [False] * n
    for token in text.split():
        try:
            v = int(token)
        except ValueError:
            raise GraphFormatError(f"malformed charged node id '{token}'") from None
        if not 0 <= v < n:
            raise GraphFormatError(f"charged node {v} out of range for n={n}")
        if flags[v]:
            raise GraphFormatError(f"duplicate charged node {v}")
        flags[v] = True
    return flags


def write_charges(charged: Sequence[bool]) -> str:
    ids = [str(v) for v, f in enumerate(charged) if f]
    return " ".join(ids) + ("\n" if ids else "")


def write_partition(p: Partition) -> str:
    return "\n".join(str(f) for f in p.assignment) + "\n"


def read_partition(
    text: str, n: int, charged: Optional[Sequence[bool]] = None
) -> Partition:
    """One fragment id per line; ids are renumbered densely."""
    labels = []
    for number, line in _content_lines(text):
        fields = line.split()
        if len(fields) != 1:
            raise GraphFormatError(f"line {number}: expected one fragment id")
        try:
            labels.append(int(fields[0]))
        except ValueError:
            raise GraphFormatError(f"line {number}: malformed fragment id") from None
    if len(labels) != n:
        raise GraphFormatError(f"partition file has {len(labels)} lines, expected {n}")
    return Partition.from_sparse_assignment(labels, charged)
