"""Word-order scrambling for the scrambled evaluation condition."""

from typing import List, Optional, Sequence

from app.imaginet.numcore import Rng


def scramble(tokens: Sequence[int], rng: Rng, held_token: Optional[int] = None) -> List[int]:
    """
    Uniformly permute every token except the final END sentinel.

    When ``held_token`` is given (typically the period) and it is the last
    content token, it stays in place as well.
    """
    tokens = list(tokens)
    if len(tokens) <= 1:
        return tokens
    content, tail = tokens[:-1], tokens[-1:]
    if held_token is not None and content and content[-1] == held_token:
        content, tail = content[:-1], content[-1:] + tail
    order = rng.permutation(len(content))
    return [content[i] for i in order] + tail
