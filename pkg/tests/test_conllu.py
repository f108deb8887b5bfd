import pytest

from trace_explain.conllu import (
    ConlluError,
    ParseIndex,
    fold_text,
    ingest_conllu,
    to_conllu,
)
from trace_explain.model import Origin, OriginKind

SIMPLE = """\
# sent_id = s1
# text = The CCD works
1\tThe\tthe\tDET\tDT\t_\t2\tdet\t_\t_
2\tCCD\tccd\tPROPN\tNNP\t_\t3\tnsubj\t_\t_
3\tworks\twork\tVERB\tVBZ\t_\t0\troot\t_\t_
"""


def test_empty_stream_yields_empty_list():
    assert ingest_conllu("") == []
    assert ingest_conllu("\n\n") == []


def test_simple_block():
    sentences = ingest_conllu(SIMPLE)
    assert len(sentences) == 1
    sent = sentences[0]
    assert sent.id == "s1"
    assert sent.raw_text == "The CCD works"
    assert [t.text for t in sent.tokens] == ["The", "CCD", "works"]
    assert [t.pos for t in sent.tokens] == ["DT", "NNP", "VBZ"]
    nsubj = [a for a in sent.arcs if a.label == "nsubj"]
    assert nsubj and nsubj[0].head == 3 and nsubj[0].dependent == 2


def test_label_aliases_applied():
    block = SIMPLE.replace("nsubj", "nsubj:xsubj").replace("det", "nn")
    sent = ingest_conllu(block)[0]
    labels = {a.label for a in sent.arcs}
    assert "xsubj" in labels and "compound" in labels


def test_malformed_line_names_line_number():
    bad = "1\tThe\tthe\tDET\tDT\t_\t2\tdet\t_\n"  # 9 columns
    with pytest.raises(ConlluError, match="line 1"):
        ingest_conllu(bad)


def test_multiple_heads_names_sentence():
    block = SIMPLE + "" if False else (
        "# sent_id = s1\n"
        "1\tA\ta\t_\tNN\t_\t2\tcompound\t_\t_\n"
        "2\tB\tb\t_\tNN\t_\t0\troot\t_\t_\n"
        "2\tB\tb\t_\tNN\t_\t1\tcompound\t_\t_\n"
    )
    with pytest.raises(ConlluError, match="multiple heads, sentence s1"):
        ingest_conllu(block)


def test_cycle_rejected():
    block = (
        "# sent_id = c1\n"
        "1\tA\ta\t_\tNN\t_\t2\tdep\t_\t_\n"
        "2\tB\tb\t_\tNN\t_\t1\tdep\t_\t_\n"
    )
    with pytest.raises(ConlluError, match="c1"):
        ingest_conllu(block)


def test_generated_ids_and_text():
    block = "1\tHello\thello\t_\tUH\t_\t0\troot\t_\t_\n"
    sent = ingest_conllu(block)[0]
    assert sent.id == "s1"
    assert sent.raw_text == "Hello"


def test_multiword_ranges_skipped():
    block = (
        "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tdo\tdo\t_\tVB\t_\t0\troot\t_\t_\n"
        "2\tnot\tnot\t_\tRB\t_\t1\tadvmod\t_\t_\n"
    )
    sent = ingest_conllu(block)[0]
    assert len(sent.tokens) == 2


def test_round_trip():
    original = ingest_conllu(SIMPLE, default_origin=Origin(OriginKind.SEARCH_RESULT, "u1"))
    again = ingest_conllu(to_conllu(original))
    assert again == original


def test_parse_index_lookup_folds_whitespace_and_case():
    sent = ingest_conllu(SIMPLE)[0]
    index = ParseIndex([sent])
    assert index.lookup("the  CCD   WORKS") is sent
    assert index.lookup("something else") is None
    assert fold_text("  A  b ") == "a b"
