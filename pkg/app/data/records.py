"""Joining raw captions with image feature vectors."""

import logging as log
from typing import Dict, List, Sequence, Tuple

from app.data.tokenization import tokenize
from app.data.vocabulary import encode
from app.imaginet.numcore import Vector
from app.models.caption_record import CaptionRecord
from app.models.raw_caption import RawCaption
from app.models.vocabulary import Vocabulary


def build_records(
    captions: Sequence[RawCaption], features: Dict[str, Vector], vocab: Vocabulary
) -> Tuple[List[CaptionRecord], int]:
    """Encode captions and attach their image vectors.

    Captions whose image id has no feature vector are dropped; the number
    dropped is logged and returned.
    """
    records = []
    dropped = 0
    for raw in captions:
        target = features.get(raw.image_id)
        if target is None:
            dropped += 1
            continue
        tokens = tuple(encode(vocab, tokenize(raw.caption)))
        records.append(
            CaptionRecord(image_id=raw.image_id, tokens=tokens, target=target, text=raw.caption)
        )
    if dropped:
        log.warning("Dropped %d captions without a feature vector", dropped)
    return records, dropped
