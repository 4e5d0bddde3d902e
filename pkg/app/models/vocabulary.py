"""
Data model for the bidirectional word/index map.
"""

from dataclasses import dataclass, field
from typing import ClassVar, Dict, List

from app.errors import VocabularyError

END_TOKEN = "<END>"
UNK_TOKEN = "UNK"


@dataclass
class Vocabulary:
    """
    Dense word indices with END and UNK sentinels.

    Attributes:
        words (List[str]): Index-to-word list; END is index 0 and UNK index 1.
        min_count (int): Frequency threshold the vocabulary was built with.
        index (Dict[str, int]): Word-to-index map, derived from ``words``.
    """

    END_INDEX: ClassVar[int] = 0
    UNK_INDEX: ClassVar[int] = 1

    words: List[str]
    min_count: int = 1
    index: Dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        if self.words[:2] != [END_TOKEN, UNK_TOKEN]:
            raise VocabularyError("vocabulary must start with the END and UNK sentinels")
        self.index = {word: i for i, word in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise VocabularyError("vocabulary words are not unique")

    @property
    def end_index(self) -> int:
        return self.END_INDEX

    @property
    def unk_index(self) -> int:
        return self.UNK_INDEX

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index and word not in (END_TOKEN, UNK_TOKEN)

    def lookup(self, word: str) -> int:
        """Index of ``word``, or the UNK index for out-of-vocabulary words."""
        return self.index.get(word, self.unk_index)

    def word_of(self, token: int) -> str:
        if not 0 <= token < len(self.words):
            raise VocabularyError(f"token {token} outside vocabulary of size {len(self)}")
        return self.words[token]
