#!/usr/bin/env python3
"""Convert a plain-text novel into CoNLL-U for the doppelkit pipeline.

Tokenization and sentence splitting are rule-based (Penn-style clitic
splitting); part-of-speech tags come from the pattern tagger bundled with
TextBlob, which needs no downloaded models. XPOS keeps the Penn tag, UPOS is
the standard Penn-to-Universal mapping. Nouns are lemmatized by
singularization; every other lemma is the lowercased form.

    python3 tools/prepare_tagged.py novel.txt > novel.conllu
    python3 tools/prepare_tagged.py --strip-gutenberg raw.txt --text-out novel.txt > novel.conllu
"""

import argparse
import re
import sys

from textblob.en import parse
from textblob.en.inflect import singularize

PENN_TO_UPOS = {
    "NN": "NOUN", "NNS": "NOUN", "NNP": "PROPN", "NNPS": "PROPN",
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ",
    "RB": "ADV", "RBR": "ADV", "RBS": "ADV", "WRB": "ADV",
    "DT": "DET", "PDT": "DET", "WDT": "DET",
    "PRP": "PRON", "PRP$": "PRON", "WP": "PRON", "WP$": "PRON", "EX": "PRON",
    "IN": "ADP", "RP": "ADP", "TO": "PART", "POS": "PART",
    "CC": "CCONJ", "CD": "NUM", "UH": "INTJ", "MD": "AUX",
    "FW": "X", "LS": "X", "SYM": "SYM", "$": "SYM", "#": "SYM",
    "VB": "VERB", "VBD": "VERB", "VBG": "VERB", "VBN": "VERB", "VBP": "VERB", "VBZ": "VERB",
}
BE_FORMS = {"be", "am", "is", "are", "was", "were", "been", "being", "'m", "'re"}

TOKEN_RE = re.compile(
    r"(?i:n't|'s|'re|'ve|'ll|'d|'m)\b"
    r"|(?:Mr|Mrs|Dr|St|Capt|Col|Gen|Prof|Messrs|Mme|Mlle)\."
    r"|[A-Za-zÀ-ɏ]+(?:'[A-Za-z]+)?(?=n't\b)"
    r"|[A-Za-zÀ-ɏ]+(?:-[A-Za-zÀ-ɏ]+)*"
    r"|\d+(?:[.,]\d+)*"
    r"|--+|\.\.\.|[^\sA-Za-z\d]"
)


def strip_gutenberg(text):
    start = re.search(r"^\*\*\* ?START OF.*$", text, re.M)
    end = re.search(r"^\*\*\* ?END OF.*$", text, re.M)
    if start and end:
        text = text[start.end():end.start()]
    return text


def normalize_quotes(text):
    text = text.replace("\u201c", '"').replace("\u201d", '"').replace("\u2019", "'")
    if "`" not in text:
        return text
    # Backtick-opened quotations close with a bare apostrophe; rewrite both
    # as double quotes so the apostrophe only ever marks a clitic.
    out = []
    open_quote = False
    for i, ch in enumerate(text):
        nxt = text[i + 1] if i + 1 < len(text) else " "
        if ch == "`":
            out.append('"')
            open_quote = True
        elif ch == "'" and open_quote and not nxt.isalpha():
            out.append('"')
            open_quote = False
        else:
            out.append(ch)
    return "".join(out)


def sentences(text):
    for paragraph in re.split(r"\n\s*\n", text):
        flat = " ".join(paragraph.split())
        matches = list(TOKEN_RE.finditer(flat))
        tokens = [m.group(0) for m in matches]
        current = []
        i = 0
        while i < len(tokens):
            current.append(tokens[i])
            terminator = tokens[i] in {".", "!", "?", "..."}
            i += 1
            if terminator:
                # closing quotes glued to the terminator stay in this sentence
                while (i < len(tokens) and tokens[i] in {'"', ")"}
                       and matches[i].start() == matches[i - 1].end()):
                    current.append(tokens[i])
                    i += 1
                if i >= len(tokens) or tokens[i][0].isupper() or tokens[i] == '"':
                    yield current
                    current = []
        if current:
            yield current


def lemma_for(form, penn):
    if penn in ("NNP", "NNPS"):
        return form
    low = form.lower()
    if penn == "NNS":
        return singularize(low)
    return low


def upos_for(form, penn):
    if penn.startswith("VB") and form.lower() in BE_FORMS:
        return "AUX"
    if penn in PENN_TO_UPOS:
        return PENN_TO_UPOS[penn]
    return "PUNCT"


def tag_sentence(tokens):
    tagged = parse(" ".join(tokens), tokenize=False, chunks=False)
    pairs = [w.rsplit("/", 1) for w in tagged.split(" ")]
    if len(pairs) != len(tokens):
        raise RuntimeError("tagger changed tokenization: %r" % tokens)
    return [(tok, penn) for tok, (_, penn) in zip(tokens, pairs)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("input")
    ap.add_argument("--strip-gutenberg", action="store_true")
    ap.add_argument("--text-out", help="also write the cleaned plain text here")
    args = ap.parse_args()

    with open(args.input, encoding="utf-8-sig") as fh:
        text = fh.read().replace("\r\n", "\n")
    if args.strip_gutenberg:
        text = strip_gutenberg(text)
    text = normalize_quotes(text).strip() + "\n"
    if args.text_out:
        with open(args.text_out, "w", encoding="utf-8") as fh:
            fh.write(text)

    out = sys.stdout
    for sid, sent in enumerate(sentences(text)):
        out.write("# sent_id = %d\n" % (sid + 1))
        for i, (form, penn) in enumerate(tag_sentence(sent), start=1):
            out.write("%d\t%s\t%s\t%s\t%s\t_\t_\t_\t_\t_\n"
                      % (i, form, lemma_for(form, penn), upos_for(form, penn), penn))
        out.write("\n")


if __name__ == "__main__":
    main()
