"""Tabular dataset ingestion, normalization, similarity, and row filtering.

Files are delimited text with a header row, described by a JSON sidecar
schema declaring each column's name, kind (numeric | nominal) and role
(regular | id | label). Only regular columns feed the clustering pipeline;
id and label columns ride along for provenance and reporting.
"""

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .density import NOISE, DistanceSchema, pairwise_distances
from .errors import DatasetParseError, InvalidConfigError, InvalidInputError, SchemaError

KINDS = ("numeric", "nominal")
ROLES = ("regular", "id", "label")


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    kind: str = "numeric"
    role: str = "regular"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"column {self.name!r}: unknown kind {self.kind!r}")
        if self.role not in ROLES:
            raise SchemaError(f"column {self.name!r}: unknown role {self.role!r}")


@dataclass
class Dataset:
    """A rectangular table plus its schema and provenance.

    ``columns[i]`` describes ``values[i]``, a numpy array holding one column
    (float64 for numeric, object for nominal).
    """

    name: str
    columns: list
    values: list
    provenance: dict = field(default_factory=dict)
    transforms: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.columns) != len(self.values):
            raise SchemaError("column specs and value columns differ in count")
        lengths = {len(v) for v in self.values}
        if len(lengths) > 1:
            raise SchemaError("columns have differing lengths")
        for spec, column in zip(self.columns, self.values):
            if spec.kind == "numeric" and not np.isfinite(
                np.asarray(column, dtype=float)
            ).all():
                raise InvalidInputError(f"column {spec.name!r} holds non-finite values")

    @property
    def n_rows(self):
        return len(self.values[0]) if self.values else 0

    @property
    def regular_columns(self):
        return [c for c in self.columns if c.role == "regular"]

    @property
    def n_regular(self):
        return len(self.regular_columns)

    def column(self, name):
        for spec, values in zip(self.columns, self.values):
            if spec.name == name:
                return spec, values
        raise InvalidConfigError(f"unknown attribute {name!r}")

    def distance_schema(self):
        return DistanceSchema(kinds=tuple(c.kind for c in self.regular_columns))

    def feature_rows(self):
        """Regular-column cells as a list of row tuples, mixed types preserved."""
        cols = [v for c, v in zip(self.columns, self.values) if c.role == "regular"]
        return [tuple(col[i] for col in cols) for i in range(self.n_rows)]

    def numeric_matrix(self):
        """Rows x numeric-regular-columns float matrix (reducer/EM input)."""
        cols = [
            np.asarray(v, dtype=float)
            for c, v in zip(self.columns, self.values)
            if c.role == "regular" and c.kind == "numeric"
        ]
        if not cols:
            raise InvalidInputError(f"dataset {self.name!r} has no numeric regular columns")
        return np.column_stack(cols)

    def take_rows(self, indices):
        return Dataset(
            name=self.name,
            columns=list(self.columns),
            values=[np.asarray(v)[indices] for v in self.values],
            provenance=dict(self.provenance),
            transforms=list(self.transforms),
        )


def read_schema(path):
    """Load a JSON schema descriptor: name, columns, optional expected_rows."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise SchemaError(f"cannot read schema {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"schema {path} is not valid JSON: {exc}") from exc
    if "name" not in raw or "columns" not in raw:
        raise SchemaError(f"schema {path} must declare 'name' and 'columns'")
    columns = [
        ColumnSpec(
            name=c["name"], kind=c.get("kind", "numeric"), role=c.get("role", "regular")
        )
        for c in raw["columns"]
    ]
    return {
        "name": raw["name"],
        "columns": columns,
        "delimiter": raw.get("delimiter", ","),
        "expected_rows": raw.get("expected_rows"),
    }


def load_dataset(data_path, schema):
    """Parse a delimited text file against a schema descriptor.

    ``schema`` is a path to a JSON descriptor or an already-read descriptor
    dict. Parse failures name the offending line and column; declared
    attribute counts and (when present) expected row counts are enforced.
    """
    if not isinstance(schema, dict):
        schema = read_schema(schema)
    data_path = Path(data_path)
    try:
        text = data_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DatasetParseError(f"cannot read dataset {data_path}: {exc}") from exc

    reader = csv.reader(text.splitlines(), delimiter=schema["delimiter"])
    rows = list(reader)
    if not rows:
        raise DatasetParseError(f"dataset {data_path} is empty", line=1)

    columns = schema["columns"]
    header = [h.strip() for h in rows[0]]
    declared = [c.name for c in columns]
    if header != declared:
        raise SchemaError(
            f"dataset {data_path} header {header} does not match declared columns {declared}"
        )

    raw_columns = [[] for _ in columns]
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(columns):
            raise DatasetParseError(
                f"expected {len(columns)} cells, found {len(row)}", line=line_no
            )
        for col_no, (spec, cell) in enumerate(zip(columns, row), start=1):
            cell = cell.strip()
            if spec.kind == "numeric":
                try:
                    value = float(cell)
                except ValueError:
                    raise DatasetParseError(
                        f"column {spec.name!r} expects a number, found {cell!r}",
                        line=line_no,
                        column=col_no,
                    ) from None
                if not np.isfinite(value):
                    raise DatasetParseError(
                        f"column {spec.name!r} holds non-finite value {cell!r}",
                        line=line_no,
                        column=col_no,
                    )
                raw_columns[col_no - 1].append(value)
            else:
                raw_columns[col_no - 1].append(cell)
    if not raw_columns[0]:
        raise DatasetParseError(f"dataset {data_path} has a header but no rows", line=2)

    expected = schema.get("expected_rows")
    if expected is not None and len(raw_columns[0]) != expected:
        raise SchemaError(
            f"dataset {data_path} has {len(raw_columns[0])} rows, schema expects {expected}"
        )

    values = []
    for spec, raw in zip(columns, raw_columns):
        if spec.kind == "numeric":
            values.append(np.asarray(raw, dtype=float))
        else:
            # intern repeated nominal strings
            values.append(np.asarray([str(v) for v in raw], dtype=object))

    checksum = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return Dataset(
        name=schema["name"],
        columns=columns,
        values=values,
        provenance={"path": str(data_path), "sha256": checksum},
    )


def normalize(ds):
    """Z-transform every numeric regular column (population sigma).

    Constant columns map to all zeros. Per-column (mean, sigma) parameters
    land in the dataset's transform log for reporting.
    """
    new_values = []
    params = {}
    for spec, column in zip(ds.columns, ds.values):
        if spec.role == "regular" and spec.kind == "numeric":
            col = np.asarray(column, dtype=float)
            mean = float(col.mean())
            sigma = float(np.sqrt(np.mean((col - mean) ** 2)))
            if sigma == 0.0:
                new_values.append(np.zeros_like(col))
            else:
                new_values.append((col - mean) / sigma)
            params[spec.name] = {"mean": mean, "sigma": sigma}
        else:
            new_values.append(column)
    out = Dataset(
        name=ds.name,
        columns=list(ds.columns),
        values=new_values,
        provenance=dict(ds.provenance),
        transforms=list(ds.transforms) + [{"z_normalize": params}],
    )
    return out


@dataclass
class SimilarityMatrix:
    """Symmetric attribute-based similarity: s(i, j) = 1 / (1 + distance)."""

    values: np.ndarray
    derivation: str = "inverse-distance"

    @property
    def n(self):
        return self.values.shape[0]


def data_to_similarity(data, schema=None):
    """Similarity matrix from rows: s = 1/(1 + mixed Euclidean distance).

    Accepts a Dataset, a ReducedDataset, or a plain float matrix. The
    diagonal is exactly 1 and the matrix is symmetric by construction.
    """
    if isinstance(data, Dataset):
        dist = pairwise_distances(data.feature_rows(), data.distance_schema())
    elif hasattr(data, "data"):  # ReducedDataset
        dist = pairwise_distances(data.data, None)
    else:
        dist = pairwise_distances(data, schema)
    sim = 1.0 / (1.0 + dist)
    np.fill_diagonal(sim, 1.0)
    return SimilarityMatrix(values=sim)


class Condition:
    """Base for row predicates usable with filter_examples."""

    def describe(self):
        return repr(self)

    def mask(self, ds):
        raise NotImplementedError


_COMPARATORS = {
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


@dataclass(frozen=True)
class AttributeCondition(Condition):
    """Keep rows where <attribute> <op> <value> holds."""

    attribute: str
    op: str
    value: object

    def __post_init__(self):
        if self.op not in _COMPARATORS:
            raise InvalidConfigError(f"unknown comparison operator {self.op!r}")

    def describe(self):
        return f"{self.attribute} {self.op} {self.value!r}"

    def mask(self, ds):
        spec, column = ds.column(self.attribute)
        compare = _COMPARATORS[self.op]
        if spec.kind == "numeric":
            return compare(np.asarray(column, dtype=float), float(self.value))
        return np.asarray([compare(v, self.value) for v in column], dtype=bool)


@dataclass(frozen=True)
class NonNoiseCondition(Condition):
    """Keep rows a ClusterAssignment did not mark as noise."""

    assignment: object

    def describe(self):
        return "cluster != noise"

    def mask(self, ds):
        labels = self.assignment.labels
        if len(labels) != ds.n_rows:
            raise InvalidInputError(
                f"assignment covers {len(labels)} rows, dataset has {ds.n_rows}"
            )
        return labels != NOISE


def filter_examples(ds, condition):
    """Subset of ``ds`` whose rows satisfy the condition, order preserved.

    ``condition`` is an AttributeCondition, a NonNoiseCondition, or any
    callable mapping a {column_name: value} dict to bool.
    """
    if isinstance(condition, Condition):
        mask = np.asarray(condition.mask(ds), dtype=bool)
        described = condition.describe()
    elif callable(condition):
        names = [c.name for c in ds.columns]
        mask = np.asarray(
            [
                bool(condition({n: v[i] for n, v in zip(names, ds.values)}))
                for i in range(ds.n_rows)
            ],
            dtype=bool,
        )
        described = getattr(condition, "__name__", "callable")
    else:
        raise InvalidConfigError(f"unsupported condition {condition!r}")
    out = ds.take_rows(np.flatnonzero(mask))
    out.transforms = list(out.transforms) + [{"filter": described}]
    return out
