#!/usr/bin/env python3
"""Builds data/vocab_30k.txt, an uncased WordPiece vocabulary of 30000 tokens.

Layout: special tokens, single characters (ASCII letters, digits and
punctuation, plus the accented Latin letters that survive lowercasing),
their "##" continuations, frequent English suffixes, then the most frequent
English words from the wordfreq package and frequent word-internal
character n-grams as continuation pieces, alternating until the target size
is reached.

Requires `pip install wordfreq`; the generated file is checked in.
"""
import collections
import string
import sys

import wordfreq

TARGET = 30000
SPECIAL = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
SUFFIXES = ["s", "es", "ed", "ing", "ly", "er", "ers", "est", "ion", "ions", "tion", "ment",
            "ness", "ful", "less", "able", "al", "ity", "ive", "ous", "ism", "ist", "ize", "ise"]


def main(out):
    tokens = list(SPECIAL)
    chars = list(string.ascii_lowercase) + list(string.digits) + list(string.punctuation)
    tokens += chars
    tokens += ["##" + c for c in string.ascii_lowercase + string.digits]
    tokens += ["##" + s for s in SUFFIXES]
    tokens = list(dict.fromkeys(tokens))
    seen = set(tokens)

    words = [w for w in wordfreq.top_n_list("en", 60000)
             if w.isascii() and w.isalpha() and len(w) > 1]
    ngrams = collections.Counter()
    for rank, w in enumerate(words[:20000]):
        weight = 1.0 / (rank + 10)
        for n in (2, 3, 4):
            for i in range(1, len(w) - n + 1):
                ngrams[w[i:i + n]] += weight
    pieces = ["##" + g for g, _ in ngrams.most_common()]

    wi = pi = 0
    while len(tokens) < TARGET:
        # Roughly four whole words per continuation piece, as in BERT vocabularies.
        for _ in range(4):
            while wi < len(words) and words[wi] in seen:
                wi += 1
            if wi < len(words) and len(tokens) < TARGET:
                tokens.append(words[wi]); seen.add(words[wi])
        while pi < len(pieces) and pieces[pi] in seen:
            pi += 1
        if pi < len(pieces) and len(tokens) < TARGET:
            tokens.append(pieces[pi]); seen.add(pieces[pi])
    with open(out, "w", encoding="utf-8") as f:
        f.write("\n".join(tokens) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/vocab_30k.txt")
