"""DBSCAN over mixed numeric/nominal data.

Distances follow the mixed Euclidean rule: squared differences over numeric
columns plus 0/1 mismatch over nominal columns, combined under one square
root. Neighborhood search is exact brute force; determinism and simplicity
beat index structures at the row counts this package targets (<= ~750).
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

NOISE = -1
_UNASSIGNED = -2

NUMERIC = "numeric"
NOMINAL = "nominal"


@dataclass(frozen=True)
class DistanceSchema:
    """Per-column kinds ('numeric' or 'nominal') for the rows being compared."""

    kinds: tuple

    def __post_init__(self):
        for k in self.kinds:
            if k not in (NUMERIC, NOMINAL):
                raise InvalidInputError(f"unknown column kind {k!r}")

    @property
    def n_columns(self):
        return len(self.kinds)

    @classmethod
    def all_numeric(cls, n):
        return cls(kinds=("numeric",) * n)


@dataclass
class ClusterAssignment:
    """Per-example labels: cluster ids 0..C-1, noise = -1, plus point roles."""

    labels: np.ndarray
    roles: np.ndarray  # 'core' | 'border' | 'noise'
    eps: float
    min_pts: int

    @property
    def n_examples(self):
        return len(self.labels)

    @property
    def noise_count(self):
        return int(np.sum(self.labels == NOISE))


def mixed_euclidean(a, b, schema):
    """Distance between two rows under the mixed Euclidean rule.

    sqrt( sum over numeric columns (a_i - b_i)^2
          + count of nominal columns where a_i != b_i )
    """
    if len(a) != schema.n_columns or len(b) != schema.n_columns:
        raise InvalidInputError(
            f"rows have {len(a)}/{len(b)} columns, schema declares {schema.n_columns}"
        )
    total = 0.0
    for x, y, kind in zip(a, b, schema.kinds):
        if kind == NUMERIC:
            try:
                d = float(x) - float(y)
            except (TypeError, ValueError):
                raise InvalidInputError(f"non-numeric value in numeric column: {x!r} vs {y!r}")
            if not np.isfinite(d):
                raise InvalidInputError("non-finite value in numeric column")
            total += d * d
        else:
            if x != y:
                total += 1.0
    return float(np.sqrt(total))


def _split_blocks(rows, schema):
    """Split row data into a float numeric block and an integer-coded nominal block."""
    numeric_idx = [i for i, k in enumerate(schema.kinds) if k == NUMERIC]
    nominal_idx = [i for i, k in enumerate(schema.kinds) if k == NOMINAL]
    n = len(rows)
    numeric = np.empty((n, len(numeric_idx)))
    for j, col in enumerate(numeric_idx):
        try:
            numeric[:, j] = [float(r[col]) for r in rows]
        except (TypeError, ValueError):
            raise InvalidInputError(f"non-numeric value in numeric column {col}")
    if not np.isfinite(numeric).all():
        raise InvalidInputError("non-finite value in numeric column")
    nominal = np.empty((n, len(nominal_idx)), dtype=np.int64)
    for j, col in enumerate(nominal_idx):
        values = [r[col] for r in rows]
        _, codes = np.unique(np.asarray(values, dtype=object), return_inverse=True)
        nominal[:, j] = codes
    return numeric, nominal


def pairwise_distances(data, schema=None):
    """Full n x n mixed-Euclidean distance matrix.

    ``data`` is either a float 2-D array (treated as all numeric) or a
    sequence of rows paired with a schema carrying nominal columns.
    """
    if schema is None or all(k == NUMERIC for k in schema.kinds):
        numeric = np.asarray(data, dtype=float)
        if numeric.ndim != 2:
            raise InvalidInputError("expected 2-D row data")
        if not np.isfinite(numeric).all():
            raise InvalidInputError("non-finite value in numeric column")
        nominal = np.empty((len(numeric), 0), dtype=np.int64)
    else:
        numeric, nominal = _split_blocks(data, schema)
    n = numeric.shape[0]
    sq = np.zeros((n, n))
    for j in range(numeric.shape[1]):
        col = numeric[:, j]
        diff = col[:, None] - col[None, :]
        sq += diff * diff
    for j in range(nominal.shape[1]):
        col = nominal[:, j]
        sq += (col[:, None] != col[None, :]).astype(float)
    return np.sqrt(sq)


def dbscan(data, eps, min_pts, schema=None):
    """Classic DBSCAN. Returns a ClusterAssignment.

    Clusters are maximal density-connected sets; the scan walks rows in
    order, so cluster ids are deterministic and a border point reachable
    from several clusters lands in the first-discovered one. The
    eps-neighborhood of a point includes the point itself.
    """
    if eps <= 0:
        raise InvalidInputError(f"eps must be positive, got {eps}")
    if min_pts < 1:
        raise InvalidInputError(f"min_pts must be >= 1, got {min_pts}")
    dist = pairwise_distances(data, schema)
    n = dist.shape[0]
    if n == 0:
        raise InvalidInputError("dbscan needs at least one example")

    within = dist <= eps
    neighbor_counts = within.sum(axis=1)
    is_core = neighbor_counts >= min_pts

    labels = np.full(n, _UNASSIGNED, dtype=int)
    cluster = 0
    for p in range(n):
        if labels[p] != _UNASSIGNED:
            continue
        if not is_core[p]:
            labels[p] = NOISE  # may later be promoted to border by a reaching cluster
            continue
        labels[p] = cluster
        frontier = np.array([p])
        while frontier.size:
            reached = within[frontier].any(axis=0)
            claimable = reached & ((labels == _UNASSIGNED) | (labels == NOISE))
            if not claimable.any():
                break
            labels[claimable] = cluster
            frontier = np.flatnonzero(claimable & is_core)
        cluster += 1

    roles = np.empty(n, dtype=object)
    roles[is_core] = "core"
    roles[(labels != NOISE) & ~is_core] = "border"
    roles[labels == NOISE] = "noise"
    return ClusterAssignment(labels=labels, roles=roles.astype(str), eps=float(eps), min_pts=int(min_pts))


def cluster_count(assignment):
    """Number of distinct non-noise cluster labels (performance-1)."""
    labels = assignment.labels
    return int(len(set(labels[labels != NOISE].tolist())))
