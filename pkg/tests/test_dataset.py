import json

import numpy as np
import pytest

from redclust.dataset import (
    AttributeCondition,
    ColumnSpec,
    Dataset,
    NonNoiseCondition,
    data_to_similarity,
    filter_examples,
    load_dataset,
    normalize,
    read_schema,
)
from redclust.density import dbscan, mixed_euclidean
from redclust.errors import (
    DatasetParseError,
    InvalidConfigError,
    SchemaError,
)


def write_dataset(tmp_path, name, header, rows, columns, expected_rows=None):
    data_path = tmp_path / f"{name}.csv"
    data_path.write_text("\n".join([",".join(header)] + [",".join(map(str, r)) for r in rows]))
    schema = {"name": name, "columns": columns}
    if expected_rows is not None:
        schema["expected_rows"] = expected_rows
    schema_path = tmp_path / f"{name}.schema.json"
    schema_path.write_text(json.dumps(schema))
    return data_path, schema_path


@pytest.fixture
def small_mixed(tmp_path):
    return write_dataset(
        tmp_path,
        "mini",
        ["id", "a", "b", "color", "class"],
        [
            ["r1", 1.0, 10.0, "red", "x"],
            ["r2", 2.0, 20.0, "blue", "x"],
            ["r3", 3.0, 30.0, "red", "y"],
        ],
        [
            {"name": "id", "kind": "nominal", "role": "id"},
            {"name": "a", "kind": "numeric"},
            {"name": "b", "kind": "numeric"},
            {"name": "color", "kind": "nominal"},
            {"name": "class", "kind": "nominal", "role": "label"},
        ],
    )


class TestLoadDataset:
    def test_basic_load(self, small_mixed):
        ds = load_dataset(*small_mixed)
        assert ds.name == "mini"
        assert ds.n_rows == 3
        assert ds.n_regular == 3  # a, b, color; id and label excluded
        assert ds.distance_schema().kinds == ("numeric", "numeric", "nominal")
        assert ds.numeric_matrix().shape == (3, 2)
        assert ds.provenance["path"].endswith("mini.csv")
        assert len(ds.provenance["sha256"]) == 64

    def test_empty_file(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        s = tmp_path / "empty.schema.json"
        s.write_text(json.dumps({"name": "empty", "columns": [{"name": "a"}]}))
        with pytest.raises(DatasetParseError):
            load_dataset(p, s)

    def test_header_only(self, tmp_path):
        p = tmp_path / "h.csv"
        p.write_text("a\n")
        s = tmp_path / "h.schema.json"
        s.write_text(json.dumps({"name": "h", "columns": [{"name": "a"}]}))
        with pytest.raises(DatasetParseError):
            load_dataset(p, s)

    def test_bad_numeric_cell_names_location(self, tmp_path):
        paths = write_dataset(
            tmp_path,
            "bad",
            ["a", "b"],
            [[1.0, 2.0], [3.0, "oops"], [5.0, 6.0]],
            [{"name": "a"}, {"name": "b"}],
        )
        with pytest.raises(DatasetParseError) as err:
            load_dataset(*paths)
        assert err.value.line == 3
        assert err.value.column == 2

    def test_nonfinite_cell_rejected(self, tmp_path):
        paths = write_dataset(tmp_path, "inf", ["a"], [[1.0], ["inf"]], [{"name": "a"}])
        with pytest.raises(DatasetParseError):
            load_dataset(*paths)

    def test_header_mismatch(self, tmp_path):
        paths = write_dataset(tmp_path, "hm", ["x", "y"], [[1, 2]], [{"name": "a"}, {"name": "y"}])
        with pytest.raises(SchemaError):
            load_dataset(*paths)

    def test_ragged_row(self, tmp_path):
        p = tmp_path / "r.csv"
        p.write_text("a,b\n1,2\n3\n")
        s = tmp_path / "r.schema.json"
        s.write_text(json.dumps({"name": "r", "columns": [{"name": "a"}, {"name": "b"}]}))
        with pytest.raises(DatasetParseError) as err:
            load_dataset(p, s)
        assert err.value.line == 3

    def test_expected_rows_enforced(self, tmp_path):
        paths = write_dataset(
            tmp_path, "er", ["a"], [[1.0], [2.0]], [{"name": "a"}], expected_rows=3
        )
        with pytest.raises(SchemaError):
            load_dataset(*paths)

    def test_missing_file(self, tmp_path):
        s = tmp_path / "s.json"
        s.write_text(json.dumps({"name": "s", "columns": [{"name": "a"}]}))
        with pytest.raises(DatasetParseError):
            load_dataset(tmp_path / "nope.csv", s)

    def test_schema_validation(self, tmp_path):
        s = tmp_path / "s.json"
        s.write_text(json.dumps({"columns": []}))
        with pytest.raises(SchemaError):
            read_schema(s)
        with pytest.raises(SchemaError):
            ColumnSpec(name="a", kind="weird")
        with pytest.raises(SchemaError):
            ColumnSpec(name="a", role="weird")


class TestNormalize:
    def test_constant_column_zeroed(self):
        ds = Dataset(
            name="c",
            columns=[ColumnSpec("a")],
            values=[np.array([7.0, 7.0, 7.0])],
        )
        out = normalize(ds)
        assert np.array_equal(out.values[0], np.zeros(3))

    def test_population_sigma_convention(self):
        ds = Dataset(name="p", columns=[ColumnSpec("a")], values=[np.array([1.0, 2.0, 3.0])])
        out = normalize(ds)
        assert np.allclose(out.values[0], [-1.2247, 0.0, 1.2247], atol=1e-4)

    def test_zero_mean_unit_sigma(self):
        rng = np.random.default_rng(91)
        ds = Dataset(
            name="z",
            columns=[ColumnSpec("a"), ColumnSpec("b")],
            values=[rng.normal(5.0, 2.0, size=40), rng.uniform(size=40)],
        )
        out = normalize(ds)
        for col in out.values:
            assert abs(col.mean()) <= 1e-12
            assert abs(np.sqrt(np.mean((col - col.mean()) ** 2)) - 1.0) <= 1e-9

    def test_nominal_and_label_untouched(self, tmp_path, small_mixed):
        ds = load_dataset(*small_mixed)
        out = normalize(ds)
        assert list(out.values[3]) == ["red", "blue", "red"]
        assert list(out.values[4]) == ["x", "x", "y"]
        assert out.transforms[-1]["z_normalize"].keys() == {"a", "b"}


class TestSimilarity:
    def test_identical_rows_similarity_one(self):
        x = np.tile([1.5, -2.0], (4, 1))
        sim = data_to_similarity(x)
        assert np.array_equal(sim.values, np.ones((4, 4)))

    def test_distance_one_gives_half(self):
        x = np.array([[0.0], [1.0]])
        sim = data_to_similarity(x)
        assert sim.values[0, 1] == pytest.approx(0.5)
        assert sim.values[0, 0] == 1.0

    @pytest.mark.parametrize("n", [10, 50])
    def test_matches_double_loop_oracle(self, n):
        rng = np.random.default_rng(92)
        ds = Dataset(
            name="o",
            columns=[ColumnSpec("a"), ColumnSpec("c", kind="nominal")],
            values=[
                rng.normal(size=n),
                np.asarray([["u", "v"][i] for i in rng.integers(2, size=n)], dtype=object),
            ],
        )
        sim = data_to_similarity(ds)
        schema = ds.distance_schema()
        rows = ds.feature_rows()
        for i in range(n):
            for j in range(n):
                expected = 1.0 / (1.0 + mixed_euclidean(rows[i], rows[j], schema))
                assert sim.values[i, j] == pytest.approx(expected, abs=1e-12)
        assert np.max(np.abs(sim.values - sim.values.T)) <= 1e-12


class TestFilterExamples:
    def test_always_true_identity(self, small_mixed):
        ds = load_dataset(*small_mixed)
        out = filter_examples(ds, lambda row: True)
        assert out.n_rows == ds.n_rows
        assert [c.name for c in out.columns] == [c.name for c in ds.columns]

    def test_always_false_keeps_schema(self, small_mixed):
        ds = load_dataset(*small_mixed)
        out = filter_examples(ds, lambda row: False)
        assert out.n_rows == 0
        assert [c.name for c in out.columns] == [c.name for c in ds.columns]

    def test_attribute_condition(self, small_mixed):
        ds = load_dataset(*small_mixed)
        out = filter_examples(ds, AttributeCondition("a", ">=", 2.0))
        assert out.n_rows == 2
        assert list(out.values[1]) == [2.0, 3.0]

    def test_unknown_attribute_rejected(self, small_mixed):
        ds = load_dataset(*small_mixed)
        with pytest.raises(InvalidConfigError):
            filter_examples(ds, AttributeCondition("missing", ">", 0))

    def test_non_noise_filter(self):
        rng = np.random.default_rng(93)
        dense = rng.normal(scale=0.2, size=(17, 2))
        outliers = np.array([[50.0, 50.0], [-60.0, 10.0], [30.0, -40.0]])
        x = np.vstack([dense, outliers])
        ds = Dataset(
            name="n",
            columns=[ColumnSpec("x"), ColumnSpec("y")],
            values=[x[:, 0], x[:, 1]],
        )
        assignment = dbscan(x, eps=1.0, min_pts=5)
        assert assignment.noise_count == 3
        out = filter_examples(ds, NonNoiseCondition(assignment))
        assert out.n_rows == 17

    def test_order_preserved(self, small_mixed):
        ds = load_dataset(*small_mixed)
        out = filter_examples(ds, AttributeCondition("color", "==", "red"))
        assert list(out.values[0]) == ["r1", "r3"]
