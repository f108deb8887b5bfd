import random

import pytest
from hypothesis import given, strategies as st

from trace_explain.kmp import kmp_find, word_boundary_matches


def naive_find(pattern: str, text: str) -> list[int]:
    """Independent O(n*m) oracle."""
    pattern = pattern.lower()
    text = text.lower()
    return [
        i for i in range(len(text) - len(pattern) + 1) if text[i : i + len(pattern)] == pattern
    ]


def test_overlapping_matches():
    assert kmp_find("aba", "ababa") == [0, 2]


def test_case_insensitive_concept_match():
    assert kmp_find("wayside data", "The Wayside Data unit reports hourly.") == [4]


def test_no_match():
    assert kmp_find("xyz", "abc") == []


def test_empty_pattern_rejected():
    with pytest.raises(ValueError):
        kmp_find("", "abc")


def test_word_boundaries():
    assert word_boundary_matches("data", "datapath and data.") == [13]
    assert word_boundary_matches("emp", "template EMP here") == [9]


@given(
    st.text(alphabet="ab", min_size=1, max_size=8),
    st.text(alphabet="ab", max_size=200),
)
def test_matches_naive_oracle(pattern, text):
    assert kmp_find(pattern, text) == naive_find(pattern, text)


def test_random_oracle_small():
    rng = random.Random(13)
    alphabet = "abcde"
    for _ in range(500):
        pattern = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 8)))
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 200)))
        assert kmp_find(pattern, text) == naive_find(pattern, text)
