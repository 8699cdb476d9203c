#!/usr/bin/env python3
"""Builds the bundled desk-scale evaluation fixture under data/corpus/.

references.jsonl  200 English segments (tools/data/corpus_sentences.txt)
outputs.jsonl     four synthetic systems, each a word-level corruption of the
                  reference at a different rate (drops, swaps, replacements)
judgments.tsv     relative-ranking pairs: per segment, every pair of systems
                  whose edit counts differ; the less edited output is the
                  better one, flipped with probability 0.15 to mimic
                  annotator noise

The fixture is synthetic. It exercises the harness; it is not WMT data.
"""
import itertools
import json
import random

LANG_PAIR = "toy-en"
SYSTEMS = {"sys-a": 0.05, "sys-b": 0.15, "sys-c": 0.3, "sys-d": 0.5}
FLIP = 0.15


def corrupt(words, rate, pool, rng):
    out, edits, i = [], 0, 0
    while i < len(words):
        w = words[i]
        r = rng.random()
        if r < rate / 3 and len(words) > 3:
            edits += 1
        elif r < 2 * rate / 3 and i + 1 < len(words):
            out += [words[i + 1], w]; edits += 1; i += 1
        elif r < rate:
            out.append(rng.choice(pool)); edits += 1
        else:
            out.append(w)
        i += 1
    return out, edits


def main():
    rng = random.Random(20221)
    sentences = [l.strip() for l in open("tools/data/corpus_sentences.txt", encoding="utf-8") if l.strip()]
    pool = sorted({w.strip(".,").lower() for s in sentences for w in s.split() if w.strip(".,").isalpha()})
    with open("data/corpus/references.jsonl", "w", encoding="utf-8") as f:
        for i, s in enumerate(sentences, 1):
            f.write(json.dumps({"seg_id": str(i), "text": s}, ensure_ascii=False, separators=(",", ":")) + "\n")
    edits = {}
    with open("data/corpus/outputs.jsonl", "w", encoding="utf-8") as f:
        for i, s in enumerate(sentences, 1):
            for system, rate in SYSTEMS.items():
                words, n = corrupt(s.split(), rate, pool, rng)
                edits[(system, i)] = n
                f.write(json.dumps({"seg_id": str(i), "system": system, "text": " ".join(words)},
                                   ensure_ascii=False, separators=(",", ":")) + "\n")
    with open("data/corpus/judgments.tsv", "w", encoding="utf-8") as f:
        f.write("lang_pair\tseg_id\tbetter\tworse\n")
        for i in range(1, len(sentences) + 1):
            for a, b in itertools.combinations(SYSTEMS, 2):
                ea, eb = edits[(a, i)], edits[(b, i)]
                if ea == eb:
                    continue
                better, worse = (a, b) if ea < eb else (b, a)
                if rng.random() < FLIP:
                    better, worse = worse, better
                f.write(f"{LANG_PAIR}\t{i}\t{better}\t{worse}\n")


if __name__ == "__main__":
    main()
