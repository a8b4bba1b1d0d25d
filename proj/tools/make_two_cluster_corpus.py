"""Writes tests/data/two_cluster_corpus.tsv.

Documents with ids a-NNN draw words only from cluster A, b-NNN only from
cluster B, so no word pair ever co-occurs across clusters.
"""
import random
import sys
from pathlib import Path

CLUSTER_A = ["granite", "basalt", "gabbro", "diorite", "andesite", "rhyolite",
             "dacite", "tuff", "obsidian", "pumice", "magma", "pluton",
             "batholith", "dyke", "sill", "lava", "scoria", "ignimbrite",
             "kimberlite", "peridotite", "syenite", "felsite", "porphyry", "xenolith"]
CLUSTER_B = ["coral", "lagoon", "atoll", "reef", "shoal", "sandbar",
             "estuary", "delta", "marsh", "fjord", "tide", "beach",
             "dune", "spit", "barrier", "mangrove", "oyster", "seagrass",
             "inlet", "cove", "bay", "salt", "surf", "wave"]


def main(out: Path, docs_per_cluster: int = 150, length: int = 40, seed: int = 11) -> None:
    rng = random.Random(seed)
    lines = []
    for tag, words in (("a", CLUSTER_A), ("b", CLUSTER_B)):
        # Zipf-like word frequencies within each cluster.
        weights = [1.0 / (rank + 1) for rank in range(len(words))]
        for i in range(docs_per_cluster):
            text = " ".join(rng.choices(words, weights, k=length))
            lines.append(f"{tag}-{i:03d}\t{text.capitalize()}.")
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    root = Path(__file__).resolve().parent.parent
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else root / "tests" / "data" / "two_cluster_corpus.tsv")
