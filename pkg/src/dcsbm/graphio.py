"""Plain-text graph, label and model-file formats.

Edge lists are one "u v" pair per line, 0-indexed, with '#' comments and
blank lines skipped; duplicates and self-loops are rejected with their
line number. Model files are "key = value" lines with whitespace-separated
arrays; weights may name a family instead of listing values.
"""

from __future__ import annotations

import numpy as np

from .model import DcsbmParams, Graph, contiguous_sigma, weight_family


class GraphFormatError(ValueError):
    """Malformed input file; message carries the offending line number."""


def read_edge_list(path, n: int | None = None, one_indexed: bool = False) -> Graph:
    us: list[int] = []
    vs: list[int] = []
    seen: set[tuple[int, int]] = set()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphFormatError(f"{path}:{lineno}: expected 'u v', got {raw!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise GraphFormatError(f"{path}:{lineno}: non-integer vertex") from exc
            if one_indexed:
                u -= 1
                v -= 1
            if u == v:
                raise GraphFormatError(f"{path}:{lineno}: self-loop at vertex {u}")
            if u < 0 or v < 0:
                raise GraphFormatError(f"{path}:{lineno}: negative vertex index")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphFormatError(f"{path}:{lineno}: duplicate edge {key}")
            seen.add(key)
            us.append(key[0])
            vs.append(key[1])
    max_idx = max((max(us, default=-1), max(vs, default=-1)))
    size = n if n is not None else max_idx + 1
    if max_idx >= size:
        raise GraphFormatError(f"{path}: vertex {max_idx} outside n={size}")
    return Graph.from_edge_arrays(
        size, np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64)
    )


def write_edge_list(graph: Graph, path) -> None:
    with open(path, "w") as fh:
        for u, v in graph.edges:
            fh.write(f"{u} {v}\n")


def read_labels(path, n: int | None = None) -> np.ndarray:
    pairs: dict[int, int] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphFormatError(f"{path}:{lineno}: expected 'vertex label'")
            try:
                u, lab = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise GraphFormatError(f"{path}:{lineno}: non-integer entry") from exc
            if u in pairs:
                raise GraphFormatError(f"{path}:{lineno}: duplicate vertex {u}")
            pairs[u] = lab
    size = n if n is not None else (max(pairs) + 1 if pairs else 0)
    out = np.full(size, -1, dtype=np.int64)
    for u, lab in pairs.items():
        if not 0 <= u < size:
            raise GraphFormatError(f"{path}: vertex {u} outside n={size}")
        out[u] = lab
    return out


def write_labels(labels: np.ndarray, path) -> None:
    with open(path, "w") as fh:
        for u, lab in enumerate(labels):
            fh.write(f"{u} {int(lab)}\n")


def read_model_file(path) -> DcsbmParams:
    fields: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise GraphFormatError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            fields[key.strip()] = val.strip()
    try:
        n = int(fields["n"])
        K = int(fields["K"])
        alpha = np.array([float(x) for x in fields["alpha"].split()])
        block = np.array([float(x) for x in fields["block"].split()]).reshape(K, K)
    except KeyError as exc:
        raise GraphFormatError(f"{path}: missing required field {exc}") from exc
    except ValueError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc
    if "sigma" in fields:
        sigma = np.array([int(x) for x in fields["sigma"].split()], dtype=np.int64)
    else:
        sigma = contiguous_sigma(n, alpha)
    wspec = fields.get("weights", "family:constant:1")
    if wspec.startswith("family:"):
        parts = wspec.split(":")
        name = parts[1]
        param = float(parts[2]) if len(parts) > 2 else None
        extra = tuple(float(x) for x in parts[3:])
        weights = weight_family(name, n, sigma=sigma, param=param, extra=extra)
    else:
        weights = np.array([float(x) for x in wspec.split()])
    return DcsbmParams(n=n, K=K, alpha=alpha, sigma=sigma, weights=weights, block=block)


def write_eigvec_csv(path, vectors: np.ndarray, schema: str = "eigvecs") -> None:
    """node,value1[,value2,...] with a schema version comment line."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    if vectors.shape[0] < vectors.shape[1]:
        vectors = vectors.T
    cols = ",".join(f"value{i + 1}" for i in range(vectors.shape[1]))
    with open(path, "w") as fh:
        fh.write(f"# dcsbm-csv v1 {schema}\n")
        fh.write(f"node,{cols}\n")
        for u in range(vectors.shape[0]):
            vals = ",".join(repr(float(x)) for x in vectors[u])
            fh.write(f"{u},{vals}\n")
