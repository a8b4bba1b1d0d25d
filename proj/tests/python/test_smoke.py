import csv
import io
import json
import math
import os
import subprocess

import jsonschema
import numpy as np
import pytest

GEOJSON_SCHEMA = {
    "type": "object",
    "required": ["type", "features"],
    "properties": {
        "type": {"const": "FeatureCollection"},
        "features": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["type", "geometry", "properties"],
                "properties": {
                    "type": {"const": "Feature"},
                    "geometry": {
                        "type": "object",
                        "required": ["type", "coordinates"],
                        "additionalProperties": False,
                        "properties": {
                            "type": {"const": "Point"},
                            "coordinates": {
                                "type": "array",
                                "minItems": 2,
                                "maxItems": 2,
                                "prefixItems": [
                                    {"type": "number", "minimum": -180, "maximum": 180},
                                    {"type": "number", "minimum": -90, "maximum": 90},
                                ],
                            },
                        },
                    },
                    "properties": {
                        "type": "object",
                        "required": ["role"],
                        "properties": {"role": {"enum": ["city", "mine"]}},
                    },
                },
            },
        },
    },
}


def test_distances_and_similarity(geoglove):
    assert geoglove.haversine_km(0, 0, 0, 180) == pytest.approx(math.pi * 6371.0, abs=1e-9)
    assert geoglove.haversine_km(90, 0, 0, 0) == pytest.approx(10007.5434, abs=5e-5)
    assert geoglove.haversine_km(12.0, 7.0, 12.0, 7.0) == 0.0
    with pytest.raises(geoglove.ParseError):
        geoglove.haversine_km(91, 0, 0, 0)
    u, v = np.array([1.0, 2.0, 3.0]), np.array([-2.0, 0.5, 4.0])
    want = u @ v / np.linalg.norm(u) / np.linalg.norm(v)
    assert geoglove.cosine_similarity(u, v) == pytest.approx(want, abs=1e-14)
    assert geoglove.cosine_similarity(3 * u, v) == pytest.approx(want, abs=1e-14)
    with pytest.raises(geoglove.ZeroVector):
        geoglove.cosine_similarity(np.zeros(3), v)
    assert geoglove.rmse([3, 4]) == pytest.approx(math.sqrt(12.5), abs=1e-12)


def test_text_helpers(geoglove):
    assert geoglove.porter_stem("caresses") == "caress"
    assert geoglove.porter_stem("running") == "run"
    assert geoglove.tokenize("Lithium-rich Brines, 2024!") == ["lithium", "rich", "brines"]
    assert geoglove.kinds() == ["none", "pca", "ae", "vae", "vae-lstm"]
    assert geoglove.technique_label("none") == "No Dimensionality Reduction"


def test_pca_matches_numpy(geoglove):
    rng = np.random.default_rng(3)
    x = rng.normal(size=(80, 6)) * np.array([5, 3, 1, 0.5, 0.2, 0.1])
    model = geoglove.fit_reducer(x, "pca")
    assert model.kind == "pca" and model.output_dim == 2 and not model.degenerate
    y = model.transform(x)
    assert y.shape == (80, 2)
    top = np.sort(np.linalg.eigvalsh(np.cov(x, rowvar=False)))[::-1][:2]
    np.testing.assert_allclose(np.var(y, axis=0, ddof=1), top, rtol=1e-8)
    np.testing.assert_array_equal(model.transform(x), y)


def test_network_fit_and_round_trip(geoglove, tmp_path):
    x = np.random.default_rng(1).normal(size=(40, 12))
    model = geoglove.fit_reducer(x, "vae", hidden_dims=[8, 4], epochs=4, batch_size=8, seed=2)
    assert model.param_names[:2] == ["enc0.w", "enc0.b"]
    assert len(model.trace) == 4
    assert all(math.isfinite(v) for row in model.trace for v in row[1:])
    model.save(tmp_path / "m.txt")
    back = geoglove.load_model(tmp_path / "m.txt", "vae")
    np.testing.assert_array_equal(back.transform(x), model.transform(x))
    with pytest.raises(geoglove.KindMismatch):
        geoglove.load_model(tmp_path / "m.txt", "ae")
    again = geoglove.fit_reducer(x, "vae", hidden_dims=[8, 4], epochs=4, batch_size=8, seed=2)
    np.testing.assert_array_equal(again.transform(x), model.transform(x))


def test_bad_inputs(geoglove):
    with pytest.raises(geoglove.ConfigError):
        geoglove.fit_reducer(np.zeros((4, 3)), "tsne")
    with pytest.raises(geoglove.ShapeMismatch):
        geoglove.fit_reducer(np.zeros(4), "pca")
    with pytest.raises(geoglove.ConfigError):
        geoglove.fit_reducer(np.ones((10, 30)), "vae-lstm", epochs=1)
    assert issubclass(geoglove.ConfigError, geoglove.Error)


def test_pipeline_outputs(geoglove, world):
    code, out, err = geoglove.run_stage(world / "pipeline.conf", "all")
    assert code == 0, err
    assert "[train] running" in out
    code, out, _ = geoglove.run_stage(world / "pipeline.conf", "all")
    assert code == 0 and "running" not in out

    outdir = world / "out"
    ranking = list(csv.DictReader(io.StringIO((outdir / "ranking_none.csv").read_text())))
    assert ranking[0]["word"] == "tugezuro"

    summary = list(csv.reader(io.StringIO((outdir / "summary.csv").read_text())))
    assert summary[0] == ["technique", "rmse_km"]
    assert [r[0] for r in summary[1:]] == ["No Dimensionality Reduction", "PCA", "Autoencoder"]

    for kind in ("none", "pca", "ae"):
        doc = json.loads((outdir / f"map_{kind}.geojson").read_text())
        jsonschema.validate(doc, GEOJSON_SCHEMA)
        roles = [f["properties"]["role"] for f in doc["features"]]
        assert roles.count("mine") == 2 and roles.count("city") >= 1

    code, _, err = geoglove.run_stage(world / "pipeline.conf", "rank", out_dir=world / "elsewhere")
    assert code == 4 and "embeddings" in err


@pytest.mark.skipif("GEOGLOVE_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_exit_codes(world):
    cli = os.environ["GEOGLOVE_CLI"]
    conf = str(world / "pipeline.conf")
    assert subprocess.run([cli, "train", "--config", conf], capture_output=True).returncode == 0
    r = subprocess.run([cli, "rank", "--config", conf, "--keyword", "unobtainium"], capture_output=True, text=True)
    assert r.returncode == 3
    r = subprocess.run([cli, "train", "--config", conf, "--corpus", str(world / "nope.tsv")], capture_output=True)
    assert r.returncode == 2
