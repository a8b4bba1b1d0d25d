import os
import pathlib
import random

import pytest

SOURCE_DIR = pathlib.Path(os.environ.get("GEOGLOVE_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))

CITIES = [
    # name, lat, lng
    ("Tugezuro", -23.40, -68.10),
    ("Kadobinu", 48.20, 16.30),
    ("Rasolemu", 10.00, 100.00),
    ("Pitaxunu", -5.00, 30.00),
    ("Wobelari", 55.00, -3.00),
]
MINES = [("Salar North", -23.50, -68.20, "lithium"), ("Danube Pit", 48.00, 16.00, "copper")]

LITHIUM = ["brine", "battery", "evaporation", "spodumene", "salar", "cathode", "extraction"]
COPPER = ["smelter", "cable", "ore", "wire", "furnace", "concentrate", "porphyry"]
NEUTRAL = ["market", "river", "festival", "school", "harbor", "weather", "music", "garden"]


@pytest.fixture(scope="session")
def geoglove():
    import geoglove as g

    return g


@pytest.fixture
def world(tmp_path, geoglove):
    for name, *_ in CITIES:
        assert geoglove.porter_stem(name.lower()) == name.lower()
    rng = random.Random(11)
    docs = []
    for i in range(40):
        docs.append(rng.sample(LITHIUM, 4) + ["lithium", "tugezuro", "tugezuro"] + rng.sample(NEUTRAL, 2))
        docs.append(rng.sample(COPPER, 4) + ["copper", "kadobinu", "kadobinu"] + rng.sample(NEUTRAL, 2))
    for i in range(20):
        docs.append(rng.sample(NEUTRAL, 5) + [CITIES[2 + i % 3][0].lower()])
    (tmp_path / "corpus.tsv").write_text("".join(f"d{i}\t{' '.join(d)}.\n" for i, d in enumerate(docs)))
    (tmp_path / "cities.csv").write_text(
        "city,city_ascii,lat,lng,country,iso2,iso3,admin_name\n"
        + "".join(f"{n},{n},{lat},{lng},Nowhere,NW,NWH,Adm\n" for n, lat, lng in CITIES)
    )
    (tmp_path / "mines.csv").write_text(
        "name,lat,lng,commodity\n" + "".join(f"{n},{lat},{lng},{c}\n" for n, lat, lng, c in MINES)
    )
    (tmp_path / "english.txt").write_text("\n".join(LITHIUM + COPPER + NEUTRAL + ["lithium", "copper"]) + "\n")
    (tmp_path / "pipeline.conf").write_text(
        "[paths]\ncorpus = corpus.tsv\n"
        f"stopwords = {SOURCE_DIR / 'data' / 'stopwords_en.txt'}\n"
        "english_words = english.txt\ncities = cities.csv\nmines = mines.csv\noutput_dir = out\n"
        "\n[pipeline]\nkeyword = lithium\nk = 3\nseed = 5\n"
        "\n[glove]\ndim = 8\nwindow = 5\nepochs = 30\nmin_count = 1\n"
        "\n[reducers]\nkinds = none, pca, ae\nhidden_dims = 6, 4\nepochs = 3\nbatch_size = 8\n"
    )
    return tmp_path
