"""Vocabulary construction and sentence encoding."""

from collections import Counter
from typing import Iterable, List, Sequence

from app.errors import ConfigError, DataError
from app.models.vocabulary import END_TOKEN, UNK_TOKEN, Vocabulary


def build_vocab(corpus: Iterable[Sequence[str]], min_count: int) -> Vocabulary:
    """
    Index every word seen at least ``min_count`` times.

    Words are ordered by descending frequency, ties alphabetically, after the
    END and UNK sentinels, so the same corpus always yields the same indices.
    """
    if min_count < 1:
        raise ConfigError(f"min_count must be at least 1, got {min_count}")
    counts: Counter = Counter()
    n_sentences = 0
    for sentence in corpus:
        counts.update(sentence)
        n_sentences += 1
    if n_sentences == 0:
        raise DataError("cannot build a vocabulary from an empty corpus")
    kept = sorted(
        (word for word, count in counts.items() if count >= min_count and word not in (END_TOKEN, UNK_TOKEN)),
        key=lambda word: (-counts[word], word),
    )
    return Vocabulary(words=[END_TOKEN, UNK_TOKEN] + kept, min_count=min_count)


def encode(vocab: Vocabulary, words: Sequence[str]) -> List[int]:
    """Token ids for ``words`` (UNK for unknown words) followed by END."""
    return [vocab.lookup(word) for word in words] + [vocab.end_index]


def decode(vocab: Vocabulary, tokens: Sequence[int]) -> List[str]:
    """Words for ``tokens``; END sentinels are dropped."""
    return [vocab.word_of(int(token)) for token in tokens if int(token) != vocab.end_index]
