"""Regenerates golden.json from cand.txt/ref.txt with a standalone BLEU implementation."""
import json
import math
import re
from collections import Counter
from pathlib import Path

HERE = Path(__file__).parent
TOKENIZER = "punctuation+lower"


def tokenize(text):
    return [t.lower() for t in re.findall(r"[A-Za-z0-9_\x80-￿]+|[^\sA-Za-z0-9_\x80-￿]", text)]


def counts(cand, ref, n):
    c = Counter(tuple(cand[i:i + n]) for i in range(len(cand) - n + 1))
    r = Counter(tuple(ref[i:i + n]) for i in range(len(ref) - n + 1))
    return sum(min(v, r[g]) for g, v in c.items()), max(len(cand) - n + 1, 0)


def bp(c, r):
    if c == 0:
        return 0.0
    return 1.0 if c > r else math.exp(1 - r / c)


def combine(ps, brevity):
    if any(p <= 0 for p in ps):
        return 0.0
    return 100 * brevity * math.exp(sum(math.log(p) for p in ps) / 4)


def sentence(name, cand, ref):
    if not cand:
        return 0.0
    ps = []
    for n in range(1, 5):
        m, c = counts(cand, ref, n)
        if c == 0:
            m, c = 0, 1
        p = m / c
        if name == "NCS" or (name in ("CN", "M2") and n > 1):
            p = (m + 1) / (c + 1)
        if name == "DC" and m == 0:
            p = 0.0 if len(cand) <= 1 else 1 / ((n - 1) + 5 / math.log(len(cand)))
        ps.append(p)
    return combine(ps, bp(len(cand), len(ref)))


def corpus(name, pairs):
    m = [0] * 4
    c = [0] * 4
    cl = rl = 0
    for cand, ref in pairs:
        for n in range(1, 5):
            mm, cc = counts(cand, ref, n)
            m[n - 1] += mm
            c[n - 1] += cc
        cl += len(cand)
        rl += len(ref)
    if cl == 0:
        return 0.0
    ps, s = [], 0
    for n in range(4):
        cc = c[n] or 1
        p = m[n] / cc
        if name == "Sacre" and m[n] == 0:
            s += 1
            p = 1 / (2 ** s * cc)
        ps.append(p)
    return combine(ps, bp(cl, rl))


def main():
    cands = (HERE / "cand.txt").read_text().splitlines()
    refs = (HERE / "ref.txt").read_text().splitlines()
    pairs = [(tokenize(a), tokenize(b)) for a, b in zip(cands, refs)]
    scores = {}
    for name in ["CN", "DC", "FC", "Moses", "NCS", "Sacre", "M2"]:
        if name in ("FC", "Moses", "Sacre"):
            s = corpus(name, pairs)
        else:
            s = sum(sentence(name, a, b) for a, b in pairs) / len(pairs)
        scores[name] = math.floor(s * 100 + 0.5) / 100
    (HERE / "golden.json").write_text(json.dumps({"tokenizer": TOKENIZER, "scores": scores}, indent=2) + "\n")
    print(scores)


if __name__ == "__main__":
    main()
