"""Plain-text file formats for instances, assignments, and advice.

Instance files::

    p klin <k> <n> <m>
    <i1> ... <ik> <rhs(+1|-1)> <weight>     (m constraint lines, 0-based)

Max-Cut graphs travel as ``p klin 2`` instances with every rhs -1.  The
header arity is an upper bound; a constraint line may carry fewer indices
(the 3-Lin reduction emits mixed unary/binary instances).  Assignment
files are ``s assign <n>`` followed by n lines of ``+1``/``-1``.  Advice
files are ``a label <n> <epsilon>`` followed by n label lines, or
``a subset <n> <epsilon>`` followed by ``<index> <+1|-1>`` lines.

Blank lines and ``#`` comments are ignored everywhere; both LF and CRLF
endings are accepted.  Writing then reading any value is the identity.
"""

from __future__ import annotations

import numpy as np

from .advice import LabelAdvice, SubsetAdvice
from .errors import InputError, ParseError
from .instances import GraphInstance, KLinInstance, graph_to_klin, _as_pm1


def _content_lines(path):
    with open(path, "r", encoding="utf-8", newline=None) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line.split()


def _parse_pm1(token: str, path, lineno, what="value") -> int:
    try:
        v = int(token)
    except ValueError:
        raise ParseError(path, lineno, f"{what} must be +1 or -1, got {token!r}") from None
    if v not in (-1, 1):
        raise ParseError(path, lineno, f"{what} must be +1 or -1, got {token!r}")
    return v


def write_instance(path, instance: KLinInstance | GraphInstance) -> None:
    if isinstance(instance, GraphInstance):
        instance = graph_to_klin(instance)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"p klin {instance.k} {instance.n} {instance.m}\n")
        for idx, rhs, w in instance.constraints:
            ids = " ".join(str(i) for i in idx)
            fh.write(f"{ids} {rhs:+d} {w!r}\n")


def read_instance(path) -> KLinInstance:
    lines = _content_lines(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError(path, 1, "missing instance header") from None
    if len(header) != 5 or header[0] != "p" or header[1] != "klin":
        raise ParseError(path, lineno, f"malformed header {' '.join(header)!r}")
    try:
        k, n, m = (int(t) for t in header[2:])
    except ValueError:
        raise ParseError(path, lineno, "header fields must be integers") from None
    if k < 1 or n < 1 or m < 0:
        raise ParseError(path, lineno, f"invalid header values k={k} n={n} m={m}")
    constraints = []
    for lineno, tokens in lines:
        if len(tokens) < 3 or len(tokens) > k + 2:
            raise ParseError(path, lineno, f"expected 1..{k} indices, rhs, and weight")
        try:
            idx = tuple(int(t) for t in tokens[:-2])
        except ValueError:
            raise ParseError(path, lineno, "indices must be integers") from None
        if any(i < 0 or i >= n for i in idx):
            raise ParseError(path, lineno, f"index out of range in {tokens[:-2]}")
        if len(set(idx)) != len(idx):
            raise ParseError(path, lineno, "indices within a constraint must be distinct")
        rhs = _parse_pm1(tokens[-2], path, lineno, what="rhs")
        try:
            w = float(tokens[-1])
        except ValueError:
            raise ParseError(path, lineno, f"weight must be a number, got {tokens[-1]!r}") from None
        if not np.isfinite(w) or w < 0:
            raise ParseError(path, lineno, f"weight must be finite and nonnegative, got {w}")
        constraints.append((idx, rhs, w))
    if len(constraints) != m:
        raise ParseError(path, lineno if constraints else 1,
                         f"header promises {m} constraints, found {len(constraints)}")
    return KLinInstance(k=k, n=n, constraints=tuple(constraints))


def instance_to_graph(instance: KLinInstance) -> GraphInstance:
    """Interpret a Max-Cut shaped 2-Lin instance as an unweighted graph."""
    edges = []
    for idx, rhs, w in instance.constraints:
        if len(idx) != 2 or rhs != -1 or w != 1.0:
            raise InputError("graph form requires arity 2, rhs -1, and unit weights")
        u, v = idx
        edges.append((min(u, v), max(u, v)))
    return GraphInstance(n=instance.n, edges=tuple(sorted(edges)))


def write_assignment(path, values) -> None:
    vals = _as_pm1(values, what="assignment")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"s assign {vals.shape[0]}\n")
        for v in vals:
            fh.write(f"{int(v):+d}\n")


def read_assignment(path) -> np.ndarray:
    lines = _content_lines(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError(path, 1, "missing assignment header") from None
    if len(header) != 3 or header[0] != "s" or header[1] != "assign":
        raise ParseError(path, lineno, f"malformed header {' '.join(header)!r}")
    try:
        n = int(header[2])
    except ValueError:
        raise ParseError(path, lineno, "assignment length must be an integer") from None
    values = []
    for lineno, tokens in lines:
        if len(tokens) != 1:
            raise ParseError(path, lineno, "expected one +1/-1 per line")
        values.append(_parse_pm1(tokens[0], path, lineno))
    if len(values) != n:
        raise ParseError(path, lineno if values else 1,
                         f"header promises {n} values, found {len(values)}")
    return np.array(values, dtype=np.int8)


def write_advice(path, advice: LabelAdvice | SubsetAdvice) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if isinstance(advice, LabelAdvice):
            fh.write(f"a label {advice.n} {advice.epsilon!r}\n")
            for v in advice.values:
                fh.write(f"{int(v):+d}\n")
        else:
            fh.write(f"a subset {advice.n} {advice.epsilon!r}\n")
            for i, v in zip(advice.indices, advice.values):
                fh.write(f"{int(i)} {int(v):+d}\n")


def read_advice(path) -> LabelAdvice | SubsetAdvice:
    lines = _content_lines(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError(path, 1, "missing advice header") from None
    if len(header) != 4 or header[0] != "a" or header[1] not in ("label", "subset"):
        raise ParseError(path, lineno, f"malformed header {' '.join(header)!r}")
    kind = header[1]
    try:
        n = int(header[2])
        epsilon = float(header[3])
    except ValueError:
        raise ParseError(path, lineno, "header needs an integer length and a float epsilon") from None
    if kind == "label":
        values = []
        for lineno, tokens in lines:
            if len(tokens) != 1:
                raise ParseError(path, lineno, "expected one +1/-1 per line")
            values.append(_parse_pm1(tokens[0], path, lineno))
        if len(values) != n:
            raise ParseError(path, lineno if values else 1,
                             f"header promises {n} labels, found {len(values)}")
        return LabelAdvice(values=np.array(values, dtype=np.int8), epsilon=epsilon)
    indices, values = [], []
    for lineno, tokens in lines:
        if len(tokens) != 2:
            raise ParseError(path, lineno, "expected '<index> <+1|-1>' per line")
        try:
            indices.append(int(tokens[0]))
        except ValueError:
            raise ParseError(path, lineno, "index must be an integer") from None
        values.append(_parse_pm1(tokens[1], path, lineno))
    return SubsetAdvice(
        n=n,
        indices=np.array(indices, dtype=np.int64),
        values=np.array(values, dtype=np.int8),
        epsilon=epsilon,
    )
