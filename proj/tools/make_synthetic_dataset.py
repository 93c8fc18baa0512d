#!/usr/bin/env python3
"""Regenerates the bundled synthetic citation dataset (data/synthcite).

The fixture mimics the content/cites layout of the real citation datasets:
1800 nodes over 4 classes, 24 binary attributes with class-specific
signature words, homophilous citations, and a few deliberate anomalies
(duplicate rows, reversed duplicates, unknown ids, self citations) so loader
accounting stays exercised. Generation is fully seeded; running this script
again reproduces the checked-in files byte for byte.
"""

import random
from pathlib import Path

SEED = 20240517
NODES = 1800
CLASSES = 4
ATTRS = 24
WORDS_PER_CLASS = ATTRS // CLASSES
SIGNATURE_P = 0.55
BACKGROUND_P = 0.04
INTRA_LINKS = 2
CROSS_P = 0.25
LABELS = ["theory", "systems", "learning", "vision"]


def main() -> None:
    rng = random.Random(SEED)
    out_dir = Path(__file__).resolve().parent.parent / "data" / "synthcite"
    out_dir.mkdir(parents=True, exist_ok=True)

    ids = [f"p{i:04d}" for i in range(NODES)]
    labels = [i % CLASSES for i in range(NODES)]

    content_lines = []
    for i, node_id in enumerate(ids):
        cls = labels[i]
        row = []
        for w in range(ATTRS):
            in_signature = cls * WORDS_PER_CLASS <= w < (cls + 1) * WORDS_PER_CLASS
            p = SIGNATURE_P if in_signature else BACKGROUND_P
            row.append(1 if rng.random() < p else 0)
        if not any(row):
            row[cls * WORDS_PER_CLASS] = 1
        content_lines.append(f"{node_id} {' '.join(map(str, row))} {LABELS[cls]}")

    by_class = [[i for i in range(NODES) if labels[i] == c] for c in range(CLASSES)]
    cite_lines = []
    for i, node_id in enumerate(ids):
        for _ in range(INTRA_LINKS):
            j = rng.choice(by_class[labels[i]])
            if j != i:
                cite_lines.append(f"{node_id} {ids[j]}")
        if rng.random() < CROSS_P:
            j = rng.randrange(NODES)
            if j != i:
                cite_lines.append(f"{node_id} {ids[j]}")

    # anomalies the loader is expected to count
    cite_lines.append(f"{ids[0]} {ids[1]}")
    cite_lines.append(f"{ids[1]} {ids[0]}")
    for k in range(4):
        cite_lines.append(f"{ids[k]} q{k:04d}")
    cite_lines.append(f"{ids[5]} {ids[5]}")
    cite_lines.append(f"{ids[6]} {ids[6]}")

    (out_dir / "synthcite.content").write_text("\n".join(content_lines) + "\n")
    (out_dir / "synthcite.cites").write_text("\n".join(cite_lines) + "\n")
    print(f"wrote {NODES} nodes, {len(cite_lines)} citation rows to {out_dir}")


if __name__ == "__main__":
    main()
