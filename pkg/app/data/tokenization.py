"""Caption tokenization."""

import re
from typing import List

# A period closing a word (but not part of an ellipsis) becomes its own token.
TERMINAL_PERIOD_PATTERN = re.compile(r"(?<=[^\s.])\.(?=\s|$)")


def tokenize(text: str) -> List[str]:
    """
    Lowercase ``text``, split off terminal periods and split on whitespace.

    Examples:
        "A cute Baby." -> ["a", "cute", "baby", "."]
    """
    if not text:
        return []
    spaced = TERMINAL_PERIOD_PATTERN.sub(" .", text.lower())
    return spaced.split()
