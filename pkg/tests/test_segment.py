from hypothesis import given, strategies as st

from trace_explain.segment import default_abbreviations, segment_sentences


def test_empty_input():
    assert segment_sentences("") == []


def test_two_sentences():
    assert segment_sentences("A works. B fails.") == [(0, "A works."), (9, "B fails.")]


def test_abbreviation_and_initial_guards():
    spans = segment_sentences("Dr. X left. He ran.")
    assert [text for _, text in spans] == ["Dr. X left.", "He ran."]
    assert spans[0][0] == 0 and spans[1][0] == 12


def test_single_letter_initial_not_split():
    spans = segment_sentences("He met X. Then left.")
    assert [text for _, text in spans] == ["He met X. Then left."]


def test_question_and_exclamation():
    spans = segment_sentences("Ready? Go! Now.")
    assert [text for _, text in spans] == ["Ready?", "Go!", "Now."]


def test_lowercase_continuation_not_split():
    spans = segment_sentences("Version 2.1 shipped. e.g. the parser.")
    assert [text for _, text in spans] == ["Version 2.1 shipped. e.g. the parser."]


def test_default_abbreviations_present():
    abbrevs = default_abbreviations()
    assert {"dr", "mr", "ms", "e.g", "i.e", "etc", "vs", "fig", "eq"} <= abbrevs


@given(st.text(alphabet="aB .?!X\n\t", max_size=120))
def test_span_invariants(text):
    spans = segment_sentences(text)
    previous_end = -1
    for offset, piece in spans:
        assert piece == piece.strip() and piece
        assert text[offset : offset + len(piece)] == piece
        assert offset > previous_end
        previous_end = offset + len(piece) - 1
    # spans cover all non-whitespace and gaps are pure whitespace
    covered = [False] * len(text)
    for offset, piece in spans:
        for i in range(offset, offset + len(piece)):
            covered[i] = True
    for i, ch in enumerate(text):
        if not ch.isspace():
            assert covered[i]
        if not covered[i]:
            assert ch.isspace()
