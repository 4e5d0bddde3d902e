"""
Data model for everything the synthetic generator produces.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from app.imaginet.numcore import Vector
from app.models.caption_record import CaptionRecord
from app.models.raw_caption import RawCaption
from app.models.vocabulary import Vocabulary


@dataclass
class SyntheticCorpus:
    """
    A generated dataset, split into training and validation scenes.

    Attributes:
        train: Encoded training captions.
        validation: Encoded validation captions (training vocabulary).
        vocabulary: Vocabulary built from the training captions.
        features: Feature vector of every image, keyed by image id.
        train_captions: Raw training captions.
        validation_captions: Raw validation captions.
        labels: Topic object word of every image, keyed by image id.
        benchmark: Word pairs scored by the cosine of their generator embeddings.
    """

    train: List[CaptionRecord]
    validation: List[CaptionRecord]
    vocabulary: Vocabulary
    features: Dict[str, Vector]
    train_captions: List[RawCaption]
    validation_captions: List[RawCaption]
    labels: Dict[str, str]
    benchmark: List[Tuple[str, str, float]] = field(default_factory=list)
