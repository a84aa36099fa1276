#!/usr/bin/env python3
"""Generate the four bundled stand-in datasets under data/.

Each dataset is synthetic but shaped like its canonical counterpart: same
regular-attribute count, a fixed row count, blob structure for the
clustering stages, and a column-correlation spectrum engineered so the
0.95 cumulative-variance rule retains the reference PCA dimension count
(5, 4, 1, 3). Construction:

1. Pick target correlation eigenvalues (fractions x dim).
2. Build a unit-diagonal correlation matrix C with exactly that spectrum
   (random orthogonal similarity, then Givens rotations onto the diagonal).
3. Sample blob + noise data in spectral coordinates, exactly whiten it
   empirically, re-color with diag(sqrt(lambda)), and rotate by C's
   eigenvectors: the sample correlation of the result is C to rounding.
4. Scale/shift columns into arbitrary units and write CSV + schema JSON.

Because the rotation is orthogonal, z-normalization undoes step 4 exactly
and DBSCAN sees the designed blob geometry in spectral coordinates.
"""

import json
from pathlib import Path

import numpy as np

from redclust.linalg import sym_eig

OUT_DIR = Path(__file__).resolve().parent.parent / "data"


def random_orthogonal(dim, rng):
    a = rng.normal(size=(dim, dim))
    return sym_eig(a + a.T).vectors


def correlation_with_spectrum(eigenvalues, rng):
    """Unit-diagonal symmetric matrix with the given eigenvalues (sum = dim)."""
    lam = np.asarray(eigenvalues, dtype=float)
    dim = len(lam)
    assert abs(lam.sum() - dim) < 1e-9
    q = random_orthogonal(dim, rng)
    c = q @ np.diag(lam) @ q.T
    for _ in range(20 * dim):
        diag = np.diag(c)
        if np.max(np.abs(diag - 1.0)) < 1e-12:
            break
        i = int(np.argmin(diag))
        j = int(np.argmax(diag))
        a, b, cij = c[i, i], c[j, j], c[i, j]
        disc = max(cij * cij - (a - 1.0) * (b - 1.0), 0.0)
        t = (-cij + np.sqrt(disc)) / (b - 1.0)
        co = 1.0 / np.sqrt(1.0 + t * t)
        si = t * co
        rows_i = co * c[i, :] + si * c[j, :]
        rows_j = -si * c[i, :] + co * c[j, :]
        c[i, :] = rows_i
        c[j, :] = rows_j
        cols_i = co * c[:, i] + si * c[:, j]
        cols_j = -si * c[:, i] + co * c[:, j]
        c[:, i] = cols_i
        c[:, j] = cols_j
        c[i, i] = 1.0
    c = (c + c.T) / 2.0
    np.fill_diagonal(c, 1.0)
    return c


def helmert_directions(k, m):
    """m orthonormal k-vectors, each orthogonal to the all-ones vector."""
    h = np.zeros((k, k))
    h[0] = 1.0 / np.sqrt(k)
    for r in range(1, k):
        h[r, :r] = 1.0
        h[r, r] = -r
        h[r] /= np.sqrt(r * (r + 1))
    return h[1 : m + 1].T  # (k, m)


def spectral_blobs(rng, n, lam, n_blobs, blob_dims, within_sigma, n_outliers):
    """Blob + noise sample in spectral coordinates with target variances lam."""
    dim = len(lam)
    b = np.array(lam[:blob_dims]) - within_sigma**2
    assert np.all(b > 0), "blob dims need variance above the within noise"
    centers = np.sqrt(n_blobs) * helmert_directions(n_blobs, blob_dims) * np.sqrt(b)

    n_core = n - n_outliers
    counts = [n_core // n_blobs] * n_blobs
    for i in range(n_core - sum(counts)):
        counts[i] += 1

    rows = []
    labels = []
    for blob, count in enumerate(counts):
        part = np.zeros((count, dim))
        part[:, :blob_dims] = centers[blob] + rng.normal(size=(count, blob_dims)) * within_sigma
        part[:, blob_dims:] = rng.normal(size=(count, dim - blob_dims)) * np.sqrt(lam[blob_dims:])
        rows.append(part)
        labels += [f"g{blob + 1}"] * count
    if n_outliers:
        spread = 2.5 * np.sqrt(lam)
        rows.append(rng.normal(size=(n_outliers, dim)) * spread)
        labels += ["outlier"] * n_outliers
    t = np.vstack(rows)
    order = rng.permutation(n)
    return t[order], [labels[i] for i in order]


def exact_spectrum(t, lam):
    """Linearly adjust t so its population covariance is exactly diag(lam)."""
    t = t - t.mean(axis=0)
    cov = t.T @ t / len(t)
    pairs = sym_eig(cov)
    whiten = pairs.vectors @ np.diag(1.0 / np.sqrt(pairs.values)) @ pairs.vectors.T
    return (t @ whiten) * np.sqrt(lam)


def build(rng, spec):
    lam = np.array(spec["fractions"]) * len(spec["fractions"])
    t, labels = spectral_blobs(
        rng,
        spec["rows"],
        lam,
        n_blobs=spec["blobs"],
        blob_dims=spec["blob_dims"],
        within_sigma=spec["within_sigma"],
        n_outliers=spec["outliers"],
    )
    t = exact_spectrum(t, lam)
    c = correlation_with_spectrum(lam, rng)
    basis = sym_eig(c).vectors  # eigenvalues of c are lam, descending
    z = t @ basis.T
    sigmas = rng.uniform(0.5, 12.0, size=len(lam))
    mus = rng.uniform(-4.0, 40.0, size=len(lam))
    return z * sigmas + mus, labels


DATASETS = {
    "e-coli": {
        "rows": 336,
        "fractions": [0.40, 0.20, 0.15, 0.12, 0.09, 0.02, 0.015, 0.005],
        "blobs": 6,
        "blob_dims": 5,
        "within_sigma": 0.12,
        "outliers": 10,
        "id_column": "seq",
        "label": "class",
        "file": "ecoli",
    },
    "acute-implant": {
        "rows": 120,
        "fractions": [0.45, 0.26, 0.15, 0.10, 0.015, 0.012, 0.008, 0.005],
        "blobs": 5,
        "blob_dims": 4,
        "within_sigma": 0.12,
        "outliers": 4,
        "id_column": None,
        "label": "diagnosis",
        "file": "acute_implant",
    },
    "blood-transfusion": {
        "rows": 748,
        "fractions": [0.96, 0.015, 0.012, 0.008, 0.005],
        "blobs": 2,
        "blob_dims": 1,
        "within_sigma": 0.15,
        "outliers": 16,
        "id_column": None,
        "label": None,
        "file": "blood_transfusion",
    },
    "prostate-cancer": {
        "rows": 100,
        "fractions": [0.58, 0.28, 0.125] + [0.015 / 15] * 15,
        "blobs": 4,
        "blob_dims": 3,
        "within_sigma": 0.12,
        "outliers": 3,
        "id_column": None,
        "label": "group",
        "file": "prostate",
    },
}


def write_dataset(name, spec, matrix, labels):
    dim = matrix.shape[1]
    attr_names = [f"a{j + 1}" for j in range(dim)]
    columns = []
    header = []
    if spec["id_column"]:
        columns.append({"name": spec["id_column"], "kind": "nominal", "role": "id"})
        header.append(spec["id_column"])
    columns += [{"name": a, "kind": "numeric", "role": "regular"} for a in attr_names]
    header += attr_names
    if spec["label"]:
        columns.append({"name": spec["label"], "kind": "nominal", "role": "label"})
        header.append(spec["label"])

    lines = [",".join(header)]
    for i, row in enumerate(matrix):
        cells = []
        if spec["id_column"]:
            cells.append(f"S{i + 1:04d}")
        cells += [f"{v:.6f}" for v in row]
        if spec["label"]:
            cells.append(labels[i])
        lines.append(",".join(cells))
    (OUT_DIR / f"{spec['file']}.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    schema = {
        "name": name,
        "delimiter": ",",
        "expected_rows": spec["rows"],
        "columns": columns,
    }
    (OUT_DIR / f"{spec['file']}.schema.json").write_text(
        json.dumps(schema, indent=2) + "\n", encoding="utf-8"
    )


def main():
    OUT_DIR.mkdir(exist_ok=True)
    rng = np.random.default_rng(20260808)
    for name, spec in DATASETS.items():
        matrix, labels = build(rng, spec)
        write_dataset(name, spec, matrix, labels)
        print(f"{name}: {matrix.shape[0]} rows x {matrix.shape[1]} attributes")


if __name__ == "__main__":
    main()
