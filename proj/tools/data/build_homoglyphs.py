#!/usr/bin/env python3
"""Writes the default visual-substitution table (data/homoglyphs.txt).

Basic Latin letters map to hand-picked look-alikes (Cyrillic, Greek,
Latin with dot/hook diacritics). Precomposed accented Latin letters map to
sibling variants of the same base letter plus the base letter's first
look-alike.
"""
import sys
import unicodedata

BASIC = {
    "a": "аɑạąàáâäα", "b": "ЬƅḃḅƄ", "c": "сϲċçćĉ", "d": "ԁḍďđɗ",
    "e": "еẹėēęèéëɛ", "f": "ḟƒϝ", "g": "ɡġģǵğ", "h": "һḥḣħĥ",
    "i": "іɩịíìïĩ", "j": "јʝĵǰ", "k": "κķḳƙк", "l": "ӏḷĺļŀ",
    "m": "ṃṁɱм", "n": "ոṅṇńñп", "o": "оοσọöòóōø", "p": "рρṗƥ",
    "q": "ԛզʠ", "r": "гṛŕřɍ", "s": "ѕṣśšş", "t": "ţṭťŧτ",
    "u": "υսụüùúū", "v": "ѵνṿⅴ", "w": "ԝѡẉẃẅ", "x": "хχẋ×",
    "y": "уүỵýÿ", "z": "ᴢżẓźž",
    "A": "АΑẠĄÀÁÂÄ", "B": "ВΒḂḄ", "C": "СϹĊÇĆ", "D": "ḌĎĐƊ",
    "E": "ЕΕẸĖĒÈÉ", "F": "ϜḞƑ", "G": "ԌĠĢǴ", "H": "НΗḤḢĦ",
    "I": "ІΙỊÍÌÏ", "J": "ЈĴ", "K": "КΚḲĶ", "L": "ḶĹĻĿ",
    "M": "МΜṂṀ", "N": "ΝṄṆŃÑ", "O": "ОΟỌÖÒÓØ", "P": "РΡṖƤ",
    "Q": "ԚǪ", "R": "ṚŔŘɌ", "S": "ЅṢŚŠŞ", "T": "ТΤṬŤŢ",
    "U": "ՍỤÜÙÚŪ", "V": "ѴṾⅤ", "W": "ԜẈẂẄ", "X": "ХΧẊ",
    "Y": "ҮΥỴÝŸ", "Z": "ΖŻẒŹŽ",
}


def base_letter(ch):
    decomposed = unicodedata.normalize("NFD", ch)
    base = decomposed[0]
    return base if base.isascii() and base.isalpha() and len(decomposed) > 1 else None


def main(out):
    table = {k: list(dict.fromkeys(v)) for k, v in BASIC.items()}
    siblings = {}
    for cp in range(0x00C0, 0x0180):
        ch = chr(cp)
        if not ch.isalpha():
            continue
        base = base_letter(ch)
        if base is not None:
            siblings.setdefault(base, []).append(ch)
    for base, group in sorted(siblings.items()):
        for ch in group:
            if ch in table:
                continue
            subs = [s for s in group if s != ch][:4] + [BASIC[base][0]]
            table[ch] = [s for s in dict.fromkeys(subs) if s != ch]
    for k, vs in table.items():
        assert k.isalpha() and vs and k not in vs, k
        assert all(len(v) == 1 and v != "," for v in vs), k
    with open(out, "w", encoding="utf-8") as f:
        f.write("# Visual substitution table. Format: letter→substitute,substitute,...\n")
        for k in sorted(table):
            f.write(f"{k}→{','.join(table[k])}\n")
    print(len(table), "entries")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/homoglyphs.txt")
