import json
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

CANONICAL_PAIRS = [
    (DATA_DIR / "ecoli.csv", DATA_DIR / "ecoli.schema.json"),
    (DATA_DIR / "acute_implant.csv", DATA_DIR / "acute_implant.schema.json"),
    (DATA_DIR / "blood_transfusion.csv", DATA_DIR / "blood_transfusion.schema.json"),
    (DATA_DIR / "prostate.csv", DATA_DIR / "prostate.schema.json"),
]


@pytest.fixture(scope="session")
def canonical_pairs():
    for data, schema in CANONICAL_PAIRS:
        assert data.is_file(), f"bundled dataset missing: {data}"
        assert schema.is_file(), f"bundled schema missing: {schema}"
    return [(str(d), str(s)) for d, s in CANONICAL_PAIRS]


@pytest.fixture
def tiny_pair(tmp_path):
    """A small two-blob dataset fast enough for end-to-end runs."""
    import numpy as np

    rng = np.random.default_rng(123)
    a = rng.normal(size=(30, 3)) * 0.2
    b = rng.normal(size=(30, 3)) * 0.2 + 5.0
    rows = np.vstack([a, b])
    data_path = tmp_path / "tiny.csv"
    lines = ["x1,x2,x3"] + [",".join(f"{v:.6f}" for v in row) for row in rows]
    data_path.write_text("\n".join(lines) + "\n")
    schema_path = tmp_path / "tiny.schema.json"
    schema_path.write_text(
        json.dumps(
            {
                "name": "tiny",
                "columns": [{"name": n} for n in ("x1", "x2", "x3")],
            }
        )
    )
    return str(data_path), str(schema_path)
