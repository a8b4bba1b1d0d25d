"""Writes tests/data/corpus3_golden.tsv from tests/data/corpus3.

Independent of the C++ code: NFKD decomposition for accent folding, a regex
split, the shipped stop list and NLTK's PorterStemmer in ORIGINAL_ALGORITHM
mode.
"""
import re
import unicodedata
from pathlib import Path

from nltk.stem.porter import PorterStemmer

ROOT = Path(__file__).resolve().parent.parent


def fold(text: str) -> str:
    out = []
    for ch in text:
        base = unicodedata.normalize("NFKD", ch)[0]
        out.append(base if base.isascii() else " ")
    return "".join(out)


def main() -> None:
    stops = {w.strip() for w in (ROOT / "data" / "stopwords_en.txt").read_text().splitlines()
             if w.strip() and not w.startswith("#")}
    stem = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM).stem
    corpus = ROOT / "tests" / "data" / "corpus3"
    lines = []
    for path in sorted(corpus.rglob("*.txt"), key=lambda p: p.relative_to(corpus).as_posix()):
        tokens = [t for t in re.split(r"[^a-z]+", fold(path.read_text(encoding="utf-8")).lower()) if len(t) >= 2]
        tokens = [stem(t) for t in tokens if t not in stops]
        lines.append(path.relative_to(corpus).as_posix() + "\t" + " ".join(tokens))
    (ROOT / "tests" / "data" / "corpus3_golden.tsv").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
