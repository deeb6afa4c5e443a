"""Candidate-output preprocessing: rule-based detokenization and removal of
trailing end-of-sequence markers."""

import re

EOS_TOKEN = "</s>"

# punctuation that attaches to the token on its left / right
_ATTACH_LEFT = {".", ",", ":", ";", "!", "?", ")", "]", "}", "%", "…"}
_ATTACH_RIGHT = {"(", "[", "{"}
# straight quotes alternate between opening (attach right) and closing
# (attach left); typographic quotes are unambiguous
_PAIRED_QUOTES = {'"', "'"}
_OPENING_QUOTES = {"„", "“", "«", "‘"}
_CLOSING_QUOTES = {"”", "»", "’"}


def detokenize(text: str, language: str = "de") -> str:
    """Reattach punctuation in whitespace-tokenized text.

    Best-effort and purely rule-based: periods, commas, colons, semicolons,
    question and exclamation marks and closing brackets glue to the previous
    token; opening brackets and opening quotes glue to the next one; straight
    quotes are tracked pairwise. Only whitespace changes, never characters.
    The language tag is accepted for interface stability; German and English
    share these conventions.
    """
    tokens = text.split()
    if not tokens:
        return ""
    out = []
    quote_open = {q: False for q in _PAIRED_QUOTES}
    glue_next = False
    for tok in tokens:
        if tok in _PAIRED_QUOTES:
            if quote_open[tok]:
                # closing: attach to previous token
                if out:
                    out[-1] += tok
                else:
                    out.append(tok)
                quote_open[tok] = False
            else:
                # opening: attach to following token
                out.append(tok)
                glue_next = True
                quote_open[tok] = True
            continue
        if tok in _ATTACH_LEFT or tok in _CLOSING_QUOTES:
            if out:
                out[-1] += tok
            else:
                out.append(tok)
            glue_next = False
            continue
        if tok in _ATTACH_RIGHT or tok in _OPENING_QUOTES:
            out.append(tok)
            glue_next = True
            continue
        if glue_next and out:
            out[-1] += tok
            glue_next = False
        else:
            out.append(tok)
    return " ".join(out)


_TERMINAL_EOS_RE = re.compile(r"(\s*" + re.escape(EOS_TOKEN) + r")+\s*$")


def strip_terminal_eos(text: str) -> str:
    """Drop the trailing end-of-sequence marker(s); interior ones stay.

    The whole terminal run is removed so the operation is idempotent.
    """
    return _TERMINAL_EOS_RE.sub("", text)
