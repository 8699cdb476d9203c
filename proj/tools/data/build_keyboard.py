#!/usr/bin/env python3
"""Writes the QWERTY letter-adjacency table (data/keyboard_qwerty.txt)."""
import sys

ROWS = ["qwertyuiop", "asdfghjkl", "zxcvbnm"]


def neighbours():
    adj = {ch: set() for row in ROWS for ch in row}
    for r, row in enumerate(ROWS):
        for c, ch in enumerate(row):
            cand = [(r, c - 1), (r, c + 1), (r - 1, c), (r - 1, c + 1), (r + 1, c - 1), (r + 1, c)]
            for rr, cc in cand:
                if 0 <= rr < len(ROWS) and 0 <= cc < len(ROWS[rr]):
                    adj[ch].add(ROWS[rr][cc])
    for a, ns in adj.items():
        for b in ns:
            assert a in adj[b], (a, b)
    return adj


def main(out):
    adj = neighbours()
    with open(out, "w", encoding="utf-8") as f:
        f.write("# QWERTY letter adjacency (symmetric). Format: key:neighbours\n")
        for ch in sorted(adj):
            f.write(f"{ch}:{''.join(sorted(adj[ch]))}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/keyboard_qwerty.txt")
