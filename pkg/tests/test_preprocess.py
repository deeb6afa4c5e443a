import itertools

from hypothesis import given, strategies as st

from oracles import tokenize_for_roundtrip
from ssteval.preprocess import detokenize, strip_terminal_eos


class TestDetokenize:
    def test_comma_period_attach_left(self):
        assert detokenize("Hallo , Welt .") == "Hallo, Welt."

    def test_bracket_attachment(self):
        assert detokenize("( a )") == "(a)"

    def test_quote_pairing(self):
        assert detokenize('Er sagte : " Ja " .') == 'Er sagte: "Ja".'

    def test_question_exclamation(self):
        assert detokenize("Wirklich ? Ja !") == "Wirklich? Ja!"

    def test_empty(self):
        assert detokenize("") == ""

    def test_german_roundtrip_sample(self):
        """Tokenizing 50 clean German sentences with an independent
        rule-based tokenizer and detokenizing recovers the originals."""
        subjects = ["Der Redner", "Die Dolmetscherin", "Unser System", "Das Publikum",
                    "Ein Teilnehmer"]
        verbs = ["sagte", "erklärte", "betonte", "fragte", "antwortete"]
        tails = [
            'dann : " Wir sind bereit " .',
            "es deutlich , aber leise .",
            "( nach kurzer Pause ) nichts mehr .",
            'nur : " Warum jetzt ? " .',
            "alles ; niemand widersprach .",
            "wenig , doch alle hörten zu !",
            "etwas Wichtiges : Qualität zählt .",
            "nichts Neues ( leider ) .",
            '" Danke " und ging .',
            "kurz , knapp und klar .",
        ]
        sentences = [
            detokenize(f"{s} {v} {t}")
            for (s, v), t in zip(itertools.product(subjects, verbs), tails * 5)
        ]
        assert len(sentences) == 25
        sentences += [detokenize(f"{v} {s.lower()} {t}")
                      for (s, v), t in zip(itertools.product(subjects, verbs), reversed(tails * 5))]
        assert len(sentences) == 50
        for sentence in sentences:
            assert detokenize(tokenize_for_roundtrip(sentence)) == sentence

    @given(st.lists(st.sampled_from(
        ["Wort", "zwei", ",", ".", ":", ";", "!", "?", "(", ")", '"', "Ende"]),
        min_size=0, max_size=12))
    def test_only_whitespace_changes(self, tokens):
        text = " ".join(tokens)
        assert "".join(detokenize(text).split()) == "".join(text.split())


class TestStripTerminalEos:
    def test_trailing_removed(self):
        assert strip_terminal_eos("Guten Tag.</s>") == "Guten Tag."

    def test_noop(self):
        assert strip_terminal_eos("Guten Tag.") == "Guten Tag."

    def test_interior_untouched(self):
        assert strip_terminal_eos("a </s> b </s>") == "a </s> b"

    def test_trailing_run(self):
        assert strip_terminal_eos("a</s> </s></s>") == "a"

    @given(st.text(alphabet="ab </s>", max_size=40))
    def test_idempotent(self, text):
        once = strip_terminal_eos(text)
        assert strip_terminal_eos(once) == once

    @given(st.text(alphabet="xy <s/>", max_size=30),
           st.integers(min_value=0, max_value=3))
    def test_appending_eos_roundtrips(self, text, k):
        base = strip_terminal_eos(text)
        # the marker is removed together with its surrounding whitespace
        expected = base if k == 0 else base.rstrip()
        assert strip_terminal_eos(base + "</s>" * k) == expected
