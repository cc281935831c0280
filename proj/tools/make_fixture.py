#!/usr/bin/env python3
"""Generate the bundled synthetic chunking corpora under data/.

The language is a phrase grammar built so the fixture is learnable but not
separable and search width genuinely matters:
  * a shared noun/verb vocabulary ("plans", "reports", ...) whose role is
    only resolved by context,
  * verb subclasses that decide the label of the following word: particle
    verbs take [PRT up] where motion verbs take [PP up], copulas take an
    ADJP complement — same surface strings, label chosen by the lexical
    context, so the cues are many, rare, and slow to learn,
  * subordinate clauses and second clauses that put whole constructions
    late in the sentence,
  * evaluation-only content words (some with telltale suffixes, some bare),
  * light label noise on the training side (relabeled or merged chunks).

Output is 3-column CoNLL (token pos chunk) with coarse pos tags: F function
words, C content words, R adverbs, U punctuation. Deterministic per seed.
"""

import argparse
import pathlib
import random

DT = ["the", "a", "an", "this", "that", "each", "some", "another"]
JJ = ["big", "red", "old", "new", "fast", "slow", "cold", "dark",
      "cheap", "deep", "broad", "quiet", "stale", "brisk", "dry", "flat",
      "green", "harsh", "idle", "keen", "loud", "mild", "neat", "plain",
      "rough", "soft", "tall", "vast", "warm", "young"]
JJ_EVAL = ["grim", "pale", "stark", "bleak", "gaunt", "wry"]
N = ["dog", "cat", "market", "price", "share", "report", "firm", "bank",
     "fund", "house", "car", "tree", "bird", "road", "door", "paper",
     "stone", "glass", "wheel", "storm", "coast", "field", "bridge",
     "engine", "harbor", "signal", "ledger", "cargo", "vault", "meadow",
     "anchor", "barrel", "canal", "desk", "farm", "gate", "hill",
     "island", "jetty", "kiln", "lamp", "mill", "notice",
     "orchard", "pier", "quarry", "river", "slope", "tower", "union",
     "valley", "wharf", "yard", "zone", "clerk", "broker", "tenant",
     "miller", "smith", "warden"]
N_EVAL = ["auction", "trader", "quotation", "carrier", "fjord", "quartz",
          "plinth", "gulch", "abbey", "crag"]
VT = ["saw", "bought", "sold", "made", "held", "kept", "found", "sent",
      "paid", "built", "broke", "wrote", "chose", "drew", "gave", "lost",
      "met", "heard", "told", "showed", "read", "won", "caught", "left"]
VT_EVAL = ["seized", "vexed", "forged", "hurled", "quashed", "spurned"]
COP = ["was", "is", "seemed", "looked", "stayed", "grew"]
PV = ["took", "put", "set", "turned", "shut", "sorted"]   # verb + PRT
MV = ["ran", "walked", "drove", "climbed", "sailed", "marched"]  # verb + PP
PART = ["up", "out", "down", "off", "over"]
NV = ["plans", "reports", "trades", "deals", "shares", "prices", "works",
      "moves", "claims", "hopes", "votes", "files", "ranks", "drifts"]
RB = ["quickly", "slowly", "sharply", "early", "late", "soon", "often",
      "still"]
DEG = ["very", "quite", "rather", "too"]
SUB = ["because", "while", "although", "unless", "since", "once"]
P = ["in", "on", "at", "over", "under", "with", "from", "into", "near",
     "through"]
CC = ["and", "but", "or"]
END = [".", ".", ".", ";"]

POS = {}
for w in DT + P + CC + PART + SUB:
    POS[w] = "F"
for w in (JJ + JJ_EVAL + N + N_EVAL + VT + VT_EVAL + COP + PV + MV + NV):
    POS[w] = "C"
for w in RB + DEG:
    POS[w] = "R"
for w in END + [","]:
    POS[w] = "U"


def pick(rng, train_pool, eval_pool, eval_mode, oov_rate):
    if eval_mode and eval_pool and rng.random() < oov_rate:
        return rng.choice(eval_pool)
    return rng.choice(train_pool)


def noun(rng, ev, oov, allow_nv):
    # Role-ambiguous words head a noun phrase only after a determiner or
    # adjective and never fill the second slot of a compound, so every token
    # string has exactly one grammatical tiling (local decisions still need
    # lookahead).
    pool = N + NV if allow_nv else N
    return pick(rng, pool, N_EVAL, ev, oov)


def make_np(rng, ev, oov):
    toks = []
    if rng.random() < 0.6:
        toks.append(rng.choice(DT))
    for _ in range(2):
        if rng.random() < 0.25:
            toks.append(pick(rng, JJ, JJ_EVAL, ev, oov))
    toks.append(noun(rng, ev, oov, allow_nv=bool(toks)))
    if rng.random() < 0.3 and len(toks) < 4:
        toks.append(noun(rng, ev, oov, allow_nv=False))
    if toks[0] in ("a", "an"):
        toks[0] = "an" if toks[1][0] in "aeiou" else "a"
    return toks


def sentence(rng, ev, oov):
    """Returns (tokens, chunks) with chunks as (start, end, label)."""
    toks, chunks = [], []

    def add_chunk(words, label):
        chunks.append((len(toks), len(toks) + len(words), label))
        toks.extend(words)

    def add_o(word):
        toks.append(word)

    def add_pp_np():
        add_chunk([rng.choice(P)], "PP")
        add_chunk(make_np(rng, ev, oov), "NP")

    def add_vp(simple=False):
        # The verb subclass fixes the label of what follows; the surface
        # word after a particle/motion verb is the same either way.
        r = rng.random() if not simple else 1.0
        if r < 0.2:
            add_chunk([rng.choice(COP)], "VP")
            adjp = [pick(rng, JJ, JJ_EVAL, ev, oov)]
            if rng.random() < 0.5:
                adjp.insert(0, rng.choice(DEG))
            add_chunk(adjp, "ADJP")
            if rng.random() < 0.2:
                add_pp_np()
        elif r < 0.35:
            add_chunk([rng.choice(PV)], "VP")
            add_chunk([rng.choice(PART)], "PRT")
            add_chunk(make_np(rng, ev, oov), "NP")
            if rng.random() < 0.2:
                add_pp_np()
        elif r < 0.5:
            add_chunk([rng.choice(MV)], "VP")
            add_chunk([rng.choice(PART)], "PP")
            add_chunk(make_np(rng, ev, oov), "NP")
            if rng.random() < 0.2:
                add_pp_np()
        else:
            add_chunk([pick(rng, VT + VT + NV, VT_EVAL, ev, oov)], "VP")
            if rng.random() < 0.7:
                add_chunk(make_np(rng, ev, oov), "NP")
            for _ in range(2):
                if rng.random() < 0.3:
                    add_pp_np()

    if rng.random() < 0.18:
        add_chunk([rng.choice(SUB)], "SBAR")
        add_chunk(make_np(rng, ev, oov), "NP")
        add_vp(simple=True)
        add_o(",")
    add_chunk(make_np(rng, ev, oov), "NP")
    if rng.random() < 0.1:
        add_o(rng.choice(CC))
        add_chunk(make_np(rng, ev, oov), "NP")
    if rng.random() < 0.1:
        add_chunk([rng.choice(RB)], "ADVP")
    add_vp()
    if rng.random() < 0.1:
        add_chunk([rng.choice(SUB)], "SBAR")
        add_chunk(make_np(rng, ev, oov), "NP")
        add_vp(simple=True)
    if rng.random() < 0.15:
        add_chunk([rng.choice(RB)], "ADVP")
    if rng.random() < 0.15:
        add_o(",")
        add_vp(simple=True)
        if rng.random() < 0.3:
            add_pp_np()
    add_o(rng.choice(END))
    return toks, chunks


LABELS = ["NP", "VP", "PP", "ADVP", "ADJP", "SBAR", "PRT"]


def add_noise(rng, toks, chunks, relabel_p, merge_p):
    """Training-side corruption, independently per chunk: relabel it, or let
    it absorb a following O token. Keeps the tiling well-formed."""
    chunks = list(chunks)
    for i, (s, e, lab) in enumerate(chunks):
        if rng.random() < relabel_p:
            lab = rng.choice([l for l in LABELS if l != lab])
            chunks[i] = (s, e, lab)
        if rng.random() < merge_p:
            nxt = chunks[i + 1][0] if i + 1 < len(chunks) else len(toks)
            if e < nxt:  # an O token follows: absorb it
                chunks[i] = (s, e + 1, lab)
    return chunks


def to_conll(toks, chunks):
    bio = ["O"] * len(toks)
    for s, e, lab in chunks:
        bio[s] = "B-" + lab
        for i in range(s + 1, e):
            bio[i] = "I-" + lab
    return "\n".join(f"{t} {POS[t]} {b}" for t, b in zip(toks, bio)) + "\n"


def write_corpus(path, n, rng, ev, oov, relabel_p=0.0, merge_p=0.0):
    with open(path, "w") as f:
        for _ in range(n):
            toks, chunks = sentence(rng, ev, oov)
            chunks = add_noise(rng, toks, chunks, relabel_p, merge_p)
            f.write(to_conll(toks, chunks))
            f.write("\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="data")
    ap.add_argument("--seed", type=int, default=20250)
    ap.add_argument("--train", type=int, default=500)
    ap.add_argument("--eval", type=int, default=200)
    ap.add_argument("--oov-rate", type=float, default=0.18)
    ap.add_argument("--relabel-noise", type=float, default=0.06)
    ap.add_argument("--merge-noise", type=float, default=0.06)
    args = ap.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    write_corpus(out / "fixture_train.conll", args.train, rng, ev=False,
                 oov=0.0, relabel_p=args.relabel_noise,
                 merge_p=args.merge_noise)
    write_corpus(out / "fixture_eval.conll", args.eval, rng, ev=True,
                 oov=args.oov_rate)
    print(f"wrote {args.train} train / {args.eval} eval sentences to {out}/")


if __name__ == "__main__":
    main()
