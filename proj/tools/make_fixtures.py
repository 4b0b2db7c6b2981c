#!/usr/bin/env python3
"""Regenerates the bundled fixture treebanks under tests/data/.

All output is deterministic. The English-like sample is produced by a small
phrase grammar that emits Stanford-style dependency labels; the coordination
corpus isolates conj attachment decisions that hinge on head-word symmetry.

    python3 tools/make_fixtures.py [outdir]
"""

import os
import random
import sys

# ---------------------------------------------------------------------------
# word lists

DETS = ["the", "a", "this", "that", "every", "some"]
ADJS = ["new", "big", "small", "strong", "weak", "high", "low", "federal",
        "annual", "quarterly", "good", "bad", "enjoyable", "easy", "slow",
        "calm", "rational", "interesting", "complementary"]
NOUNS = [("company", "companies"), ("market", "markets"), ("share", "shares"),
         ("price", "prices"), ("bank", "banks"), ("loan", "loans"),
         ("investor", "investors"), ("fund", "funds"), ("annuity", "annuities"),
         ("dish", "dishes"), ("glass", "glasses"), ("stock", "stocks"),
         ("bond", "bonds"), ("gain", "gains"), ("loss", "losses"),
         ("income", "incomes"), ("earning", "earnings"), ("table", "tables"),
         ("chair", "chairs"), ("keyboard", "keyboards"), ("screen", "screens"),
         ("winner", "winners"), ("loser", "losers"), ("man", "men"),
         ("woman", "women"), ("president", "presidents"),
         ("officer", "officers"), ("director", "directors"),
         ("chairman", "chairmen"), ("executive", "executives"),
         ("codification", "codifications"), ("clarification", "clarifications"),
         ("injury", "injuries"), ("death", "deaths")]
PROPER = ["Poland", "Hungary", "China", "India", "Moleculon", "Datapoint",
          "CityFed", "Koop", "Corp.", "Inc.", "Wilde", "Treasury"]
VERBS = [("buy", "bought", "buys"), ("sell", "sold", "sells"),
         ("say", "said", "says"), ("report", "reported", "reports"),
         ("hold", "held", "holds"), ("own", "owned", "owns"),
         ("handle", "handled", "handles"), ("rise", "rose", "rises"),
         ("fall", "fell", "falls"), ("drop", "dropped", "drops"),
         ("confirm", "confirmed", "confirms"),
         ("decline", "declined", "declines"), ("succeed", "succeeded", "succeeds"),
         ("fail", "failed", "fails"), ("boost", "boosted", "boosts"),
         ("reduce", "reduced", "reduces")]
INTRANS = [("rise", "rose"), ("fall", "fell"), ("drop", "dropped"),
           ("succeed", "succeeded"), ("fail", "failed"), ("slide", "slid")]
PREPS = ["in", "on", "at", "for", "from", "by", "with", "of", "to"]
ADVS = ["still", "also", "sharply", "quickly", "up", "down"]
NUMS = ["33", "27.5", "1.86", "139.75", "485,000", "74", "two", "three"]
UNITS = [("marks", "NNS"), ("yen", "NN"), ("%", "NN"), ("cents", "NNS"),
         ("$", "$"), ("dollars", "NNS")]

POSITIVE = ["enjoyable", "easy", "complementary", "interesting", "calm",
            "rational", "winners", "gains", "rise", "rose", "succeed",
            "succeeded", "up", "confirmed", "boost", "boosted", "good",
            "strong", "high", "recover", "risen"]
NEGATIVE = ["slow", "dump", "insulting", "demeaning", "injury", "death",
            "losers", "losses", "fall", "fell", "fail", "failed", "down",
            "declined", "crush", "bad", "weak", "low", "reduce", "dropped"]


def tok(form, pos, head, label):
    """One token; head is a phrase-local index or None for the phrase head."""
    return {"form": form, "pos": pos, "head": head, "label": label}


def shift(tokens, offset):
    out = []
    for t in tokens:
        t = dict(t)
        if t["head"] is not None:
            t["head"] += offset
        out.append(t)
    return out


class Phrase:
    def __init__(self, tokens, head):
        self.tokens = tokens
        self.head = head


def attach(parts, head_part, labels):
    """Concatenate phrases; every non-head part's head attaches to the head
    part's head with the given label."""
    tokens = []
    offsets = []
    for p in parts:
        offsets.append(len(tokens))
        tokens.extend(shift(p.tokens, len(tokens)))
    head_idx = offsets[head_part] + parts[head_part].head
    for i, p in enumerate(parts):
        if i == head_part:
            continue
        local = offsets[i] + p.head
        tokens[local]["head"] = head_idx
        tokens[local]["label"] = labels[i]
    return Phrase(tokens, head_idx)


def word(form, pos):
    return Phrase([tok(form, pos, None, None)], 0)


class Grammar:
    def __init__(self, rng):
        self.r = rng

    def noun(self, plural=None):
        sg, pl = self.r.choice(NOUNS)
        if plural is None:
            plural = self.r.random() < 0.4
        return word(pl, "NNS") if plural else word(sg, "NN")

    def np(self, depth=0, allow_pp=True):
        r = self.r
        kind = r.random()
        if kind < 0.15:
            # proper-noun compound: "Moleculon Corp."
            if r.random() < 0.5:
                return word(r.choice(PROPER), "NNP")
            a, b = r.sample(PROPER, 2)
            return attach([word(a, "NNP"), word(b, "NNP")], 1, ["nn", None])
        if kind < 0.25:
            num = word(r.choice(NUMS), "CD")
            unit, upos = r.choice(UNITS)
            return attach([num, word(unit, upos)], 1, ["num", None])
        parts = []
        labels = []
        if r.random() < 0.7:
            parts.append(word(r.choice(DETS), "DT"))
            labels.append("det")
        if r.random() < 0.35:
            parts.append(word(r.choice(ADJS), "JJ"))
            labels.append("amod")
        if r.random() < 0.15:
            parts.append(self.noun(plural=False))
            labels.append("nn")
        parts.append(self.noun())
        labels.append(None)
        head = len(parts) - 1
        phrase = attach(parts, head, labels)
        if allow_pp and depth < 1 and r.random() < 0.3:
            phrase = attach([phrase, self.pp(depth + 1)], 0, [None, "prep"])
        if depth < 1 and r.random() < 0.18:
            phrase = self.coordinate(phrase, lambda: self.np(depth + 1, False))
        return phrase

    def pp(self, depth):
        prep = word(self.r.choice(PREPS), "IN")
        return attach([prep, self.np(depth, allow_pp=False)], 0, [None, "pobj"])

    def coordinate(self, first, make):
        """first (, X)* and Y; SD style: cc and conj hang off the first conjunct."""
        parts = [first]
        labels = [None]
        if self.r.random() < 0.25:
            parts.append(word(",", ","))
            labels.append("punct")
            parts.append(make())
            labels.append("conj")
        parts.append(word("and" if self.r.random() < 0.8 else "or", "CC"))
        labels.append("cc")
        parts.append(make())
        labels.append("conj")
        return attach(parts, 0, labels)

    def verb(self, tense=None):
        base, past, third = self.r.choice(VERBS)
        tense = tense or self.r.choice(["VBD", "VBZ"])
        return word(past if tense == "VBD" else third, tense), tense

    def vp(self, depth=0, tense=None):
        r = self.r
        if r.random() < 0.2:
            base, past = r.choice(INTRANS)
            v = word(past, "VBD")
            tense = "VBD"
            parts, labels = [v], [None]
        else:
            v, tense = self.verb(tense)
            parts, labels = [v, self.np(depth)], [None, "dobj"]
        if r.random() < 0.25:
            parts.insert(0, word(r.choice(ADVS[:4]), "RB"))
            labels.insert(0, "advmod")
        if r.random() < 0.3:
            parts.append(self.pp(depth + 1))
            labels.append("prep")
        head = labels.index(None)
        phrase = attach(parts, head, labels)
        if depth == 0 and r.random() < 0.15:
            phrase = self.coordinate(phrase, lambda: self.vp(depth + 1, tense))
        return phrase

    def sentence(self):
        subj = self.np()
        pred = self.vp()
        s = attach([subj, pred, word(".", ".")], 1, ["nsubj", None, "punct"])
        return finalize(s)

    def nonprojective(self):
        """Extraposed relative clause: 'the man arrived who was tall .'"""
        r = self.r
        det = word(r.choice(DETS), "DT")
        noun = self.noun(plural=False)
        subj = attach([det, noun], 1, ["det", None])
        base, past = r.choice(INTRANS)
        tokens = shift(subj.tokens, 0)
        tokens.append(tok(past, "VBD", None, None))
        verb = len(tokens) - 1
        tokens[subj.head]["head"] = verb
        tokens[subj.head]["label"] = "nsubj"
        tokens.append(tok("who", "WP", None, "nsubj"))
        tokens.append(tok("was", "VBD", None, "cop"))
        tokens.append(tok(r.choice(ADJS), "JJ", subj.head, "rcmod"))
        adj = len(tokens) - 1
        tokens[adj - 2]["head"] = adj
        tokens[adj - 1]["head"] = adj
        tokens.append(tok(".", ".", verb, "punct"))
        return finalize(Phrase(tokens, verb))


def finalize(phrase):
    out = []
    for i, t in enumerate(phrase.tokens):
        head = 0 if i == phrase.head else t["head"] + 1
        label = "root" if i == phrase.head else t["label"]
        out.append((t["form"], t["pos"], head, label))
    return out


# ---------------------------------------------------------------------------
# lemma / sentiment / embedding resources for the English-like sample

def lemma_entries():
    rows = set()
    for sg, pl in NOUNS:
        rows.add((pl.lower(), "n", sg))
    for base, past, third in VERBS:
        rows.add((past, "v", base))
        rows.add((third, "v", base))
    for base, past in INTRANS:
        rows.add((past, "v", base))
    rows.add(("risen", "v", "rise"))
    return sorted(rows)


def embeddings(vocab, dim, rng):
    """Clustered random vectors: words sharing a lemma or semantic group are
    placed near a common centroid so cosine similarity is informative."""
    groups = [["buy", "bought", "buys", "sell", "sold", "sells"],
              ["say", "said", "says", "report", "reported", "reports"],
              ["rise", "rose", "rises", "fall", "fell", "falls", "drop",
               "dropped", "up", "down"],
              ["president", "officer", "director", "chairman", "executive",
               "presidents", "officers", "directors", "chairmen", "executives"],
              ["fund", "annuity", "funds", "annuities", "stock", "bond",
               "stocks", "bonds", "share", "shares"],
              ["gain", "gains", "loss", "losses", "income", "earning",
               "earnings"],
              ["keyboard", "keyboards", "screen", "screens", "dish", "dishes",
               "glass", "glasses", "table", "tables", "chair", "chairs"]]
    centroid = {}
    for g in groups:
        c = [rng.gauss(0, 1) for _ in range(dim)]
        for w in g:
            centroid[w] = c
    lines = []
    for w in sorted(vocab):
        base = centroid.get(w)
        if base is None:
            v = [rng.gauss(0, 1) for _ in range(dim)]
        else:
            v = [b + 0.35 * rng.gauss(0, 1) for b in base]
        lines.append(w + " " + " ".join("%.6f" % x for x in v))
    return "%d %d\n" % (len(lines), dim) + "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# coordination corpus: conj head decidable only through head-word symmetry

SYL = ["ba", "ke", "lo", "mi", "nu", "pra", "sto", "vi", "dre", "gu", "ta",
       "zo", "fen", "ril", "mok", "sa", "tu", "pe", "qua", "ho"]
SUFFIXES = ["ation", "ment", "ness", "ity", "ance", "ship", "hood", "ism",
            "ure", "dom"]
ENDINGS = ["a", "o", "e", "i", "u", "k", "p", "t"]


def common_suffix(a, b):
    n = 0
    while n < min(len(a), len(b)) and a[-1 - n] == b[-1 - n]:
        n += 1
    return n


class CoordGen:
    """Draws every word from a closed pool, so within one pool each word
    turns up in both attachment roles and only its relation to the first
    conjunct tells them apart."""

    def __init__(self, rng, used, lemmas):
        self.r = rng
        self.used = used
        self.lemmas = lemmas
        self.suf = {suf: [self.stem() + suf for _ in range(8)] for suf in SUFFIXES}
        self.cap = [(self.stem() + self.r.choice(ENDINGS)).capitalize() for _ in range(40)]
        self.lem = []
        for _ in range(20):
            stem = self.stem()
            a, b = stem + "a", stem + "o"
            self.lemmas.append((a, "n", stem))
            self.lemmas.append((b, "n", stem))
            self.lem.append((a, b))
        self.plain_words = [self.stem() + self.r.choice(ENDINGS) for _ in range(40)]
        self.verbs = [self.stem() + "ed" for _ in range(20)]
        self.lemma_of = {w: l for w, _, l in self.lemmas}
        self.pool = ([w for ws in self.suf.values() for w in ws] + self.cap +
                     [w for pair in self.lem for w in pair] + self.plain_words)

    def stem(self):
        while True:
            s = "".join(self.r.choice(SYL) for _ in range(self.r.randint(2, 3)))
            if s not in self.used:
                self.used.add(s)
                return s

    def symmetric(self, a, b):
        return (common_suffix(a, b) >= 2 or (a[0].isupper() and b[0].isupper()) or
                (a in self.lemma_of and self.lemma_of[a] == self.lemma_of.get(b)))

    def pick_other(self, avoid):
        while True:
            w = self.r.choice(self.pool)
            if all(w != a and not self.symmetric(w, a) for a in avoid):
                return w

    def symmetric_pair(self, kind):
        if kind == "suf":
            return tuple(self.r.sample(self.suf[self.r.choice(SUFFIXES)], 2))
        if kind == "cap":
            while True:
                a, b = self.r.sample(self.cap, 2)
                if common_suffix(a, b) < 2:
                    return a, b
        return self.r.choice(self.lem)[::self.r.choice([1, -1])]

    def sentence(self):
        """X and Y Z V W .  Either [X and Y] Z (Y conj X) or X and [Y Z]
        (Z conj X); the symmetric word tells which."""
        kind = self.r.choice(["suf", "cap", "lem"])
        x, partner = self.symmetric_pair(kind)
        other = self.pick_other([x, partner])
        verb = self.r.choice(self.verbs)
        obj = self.pick_other([x, partner, other])
        if self.r.random() < 0.5:
            y, z = partner, other
            rows = [(x, "NN", 4, "nn"), ("and", "CC", 1, "cc"),
                    (y, "NN", 1, "conj"), (z, "NN", 5, "nsubj")]
        else:
            y, z = other, partner
            rows = [(x, "NN", 5, "nsubj"), ("and", "CC", 1, "cc"),
                    (y, "NN", 4, "nn"), (z, "NN", 1, "conj")]
        rows += [(verb, "VBD", 0, "root"), (obj, "NN", 5, "dobj"),
                 (".", ".", 5, "punct")]
        return rows


# ---------------------------------------------------------------------------
# writers

def conllx(sentences, lemma_of=None):
    out = []
    for s in sentences:
        for i, (form, pos, head, label) in enumerate(s, 1):
            lemma = lemma_of(form, pos) if lemma_of else "_"
            cpos = pos[:2] if pos[:1].isalpha() else pos
            out.append("\t".join([str(i), form, lemma, cpos, pos, "_",
                                  str(head), label, "_", "_"]))
        out.append("")
    return "\n".join(out) + ("\n" if out else "")


UPOS = {"NN": "NOUN", "NNS": "NOUN", "NNP": "PROPN", "VBD": "VERB",
        "VBZ": "VERB", "JJ": "ADJ", "RB": "ADV", "IN": "ADP", "DT": "DET",
        "CC": "CCONJ", "CD": "NUM", ",": "PUNCT", ".": "PUNCT", "$": "SYM",
        "WP": "PRON", "MD": "AUX"}


def conllu_sample(sentences, rng):
    """CoNLL-U with comments, a multiword range and an empty node."""
    out = []
    for k, s in enumerate(sentences, 1):
        out.append("# sent_id = sample-%d" % k)
        out.append("# text = " + " ".join(t[0] for t in s))
        for i, (form, pos, head, label) in enumerate(s, 1):
            if k % 7 == 3 and i == 1 and len(s) > 2:
                out.append("1-2\t%s%s\t_\t_\t_\t_\t_\t_\t_\t_" % (s[0][0], s[1][0]))
            out.append("\t".join([str(i), form, "_", UPOS.get(pos, "X"), pos,
                                  "_", str(head), label, "_", "_"]))
            if k % 11 == 5 and i == 2:
                out.append("2.1\telided\t_\tVERB\tVBD\t_\t_\t_\t1:conj\t_")
        out.append("")
    return "\n".join(out) + "\n"


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "..", "tests", "data")
    os.makedirs(outdir, exist_ok=True)

    def write(name, text):
        with open(os.path.join(outdir, name), "w", encoding="utf-8", newline="\n") as f:
            f.write(text)

    rng = random.Random(20170403)
    g = Grammar(rng)
    sample = []
    for i in range(240):
        sample.append(g.nonprojective() if i % 30 == 29 else g.sentence())
    lemmas = {(f, c): l for f, c, l in lemma_entries()}

    def lemma_of(form, pos):
        cls = {"N": "n", "V": "v", "J": "a", "R": "r"}.get(pos[:1], "x")
        return lemmas.get((form.lower(), cls), form.lower())

    write("sample_treebank.conllx", conllx(sample, lemma_of))
    projective_32 = [s for i, s in enumerate(sample) if i % 30 != 29][:32]
    write("overfit32.conllx", conllx(projective_32))
    write("sample_dev.conllx", conllx([g.sentence() for _ in range(40)]))
    write("sample23.conllu", conllu_sample([g.sentence() for _ in range(23)], rng))
    write("sample_lemmas.tsv",
          "# form\tclass\tlemma\n" +
          "".join("%s\t%s\t%s\n" % row for row in lemma_entries()))
    write("sentiment_positive.txt",
          "# positive words\n" + "\n".join(sorted(set(POSITIVE))) + "\n")
    write("sentiment_negative.txt",
          "# negative words\n" + "\n".join(sorted(set(NEGATIVE))) + "\n")
    vocab = {t[0].lower() for s in sample for t in s if t[0][0].isalpha()}
    write("sample_embeddings.txt", embeddings(vocab, 16, random.Random(7)))

    crng = random.Random(1555)
    used, coord_lemmas = set(), []
    pool = CoordGen(crng, used, coord_lemmas)
    coord_train = [pool.sentence() for _ in range(400)]
    coord_test = [pool.sentence() for _ in range(200)]
    write("coord_train.conllx", conllx(coord_train))
    write("coord_test.conllx", conllx(coord_test))
    write("coord_lemmas.tsv", "".join("%s\t%s\t%s\n" % row
                                      for row in sorted(coord_lemmas)))


if __name__ == "__main__":
    main()
