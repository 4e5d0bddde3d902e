"""Synthetic grounded-language corpus for desk-scale experiments.

Every scene has a topic object with an attribute and a background object.
Captions always mention the topic first ("red dog near a cat."), and the
image features weight the topic fully but the background only by
``order_signal_strength``. Scrambling a caption therefore keeps its bag of
words while hiding which object is the topic.
"""

import logging
from itertools import combinations
from typing import Dict, List, Tuple

import numpy as np

from app.data.records import build_records
from app.data.tokenization import tokenize
from app.data.vocabulary import build_vocab
from app.imaginet.layers import clipped_relu
from app.imaginet.numcore import Matrix, Rng, Vector, cosine, make_rng, split_rng
from app.imaginet.utils import log_elapsed_time
from app.models.raw_caption import RawCaption
from app.models.synth_config import SynthConfig
from app.models.synthetic_corpus import SyntheticCorpus

OBJECT_WORDS = (
    "dog", "cat", "horse", "bird", "car", "boat", "tree", "chair", "table", "ball",
    "kite", "bench", "cow", "sheep", "train", "bus", "bike", "clock", "vase", "cup",
    "lamp", "bear", "truck", "plate",
)
ATTRIBUTE_WORDS = (
    "red", "blue", "green", "small", "large", "old", "young", "white", "black",
    "brown", "wooden", "shiny", "striped", "spotted",
)
TEMPLATES = (
    "{attribute} {topic} near a {background}.",
    "a {attribute} {topic} near the {background}.",
    "the {attribute} {topic} beside a {background}.",
    "one {attribute} {topic} next to a {background}.",
    "a {attribute} {topic} by the {background}.",
)
ATTRIBUTE_WEIGHT = 0.5


def _word_pool(base: Tuple[str, ...], n: int, prefix: str) -> List[str]:
    words = list(base[:n])
    words.extend(f"{prefix}{i}" for i in range(len(words), n))
    return words


class SceneSpace:
    """Fixed random embeddings from which scene feature vectors are built."""

    def __init__(self, cfg: SynthConfig, rng: Rng):
        self.cfg = cfg
        self.objects: Matrix = rng.standard_normal((cfg.n_objects, cfg.K))
        self.attributes: Matrix = rng.standard_normal((cfg.n_attributes, cfg.K))

    def clean_features(self, topic: int, attribute: int, background: int) -> Vector:
        """Role-aware scene vector before noise and rectification."""
        return (
            self.objects[topic]
            + ATTRIBUTE_WEIGHT * self.attributes[attribute]
            + self.cfg.order_signal_strength * self.objects[background]
        )

    def role_blind_features(self, topic: int, attribute: int, background: int) -> Vector:
        """Scene vector that ignores which object is the topic."""
        object_weight = 0.5 * (1.0 + self.cfg.order_signal_strength)
        return (
            object_weight * (self.objects[topic] + self.objects[background])
            + ATTRIBUTE_WEIGHT * self.attributes[attribute]
        )

    def features(self, topic: int, attribute: int, background: int, rng: Rng) -> Vector:
        """Observed image vector: noisy, rectified and rounded to f32 precision."""
        noisy = self.clean_features(topic, attribute, background)
        if self.cfg.noise_sigma > 0:
            noisy = noisy + rng.normal(0.0, self.cfg.noise_sigma, size=self.cfg.K)
        return clipped_relu(noisy).astype(np.float32).astype(np.float64)


def sample_scenes(cfg: SynthConfig, rng: Rng) -> List[Tuple[int, int, int]]:
    """Draw (topic, attribute, background) triples with distinct objects."""
    scenes = []
    for _ in range(cfg.n_scenes):
        topic = int(rng.integers(cfg.n_objects))
        background = int(rng.integers(cfg.n_objects - 1))
        if background >= topic:
            background += 1
        attribute = int(rng.integers(cfg.n_attributes))
        scenes.append((topic, attribute, background))
    return scenes


def scene_captions(
    objects: List[str], attributes: List[str], scene: Tuple[int, int, int], n: int
) -> List[str]:
    topic, attribute, background = scene
    return [
        TEMPLATES[j % len(TEMPLATES)].format(
            attribute=attributes[attribute], topic=objects[topic], background=objects[background]
        )
        for j in range(n)
    ]


def similarity_benchmark(
    space: SceneSpace, objects: List[str], attributes: List[str]
) -> List[Tuple[str, str, float]]:
    """Object/object and attribute/attribute pairs scored by embedding cosine."""
    pairs = []
    for words, vectors in ((objects, space.objects), (attributes, space.attributes)):
        for i, j in combinations(range(len(words)), 2):
            pairs.append((words[i], words[j], round(cosine(vectors[i], vectors[j]), 6)))
    return pairs


@log_elapsed_time
def gen_synthetic(cfg: SynthConfig) -> SyntheticCorpus:
    """Generate scenes, captions and features, split into train and validation."""
    rng = make_rng(cfg.seed)
    space = SceneSpace(cfg, split_rng(rng))
    noise_rng = split_rng(rng)
    objects = _word_pool(OBJECT_WORDS, cfg.n_objects, "object")
    attributes = _word_pool(ATTRIBUTE_WORDS, cfg.n_attributes, "attribute")

    scenes = sample_scenes(cfg, rng)
    n_validation = min(cfg.n_scenes - 1, max(1, int(round(cfg.n_scenes * cfg.validation_fraction))))
    n_train = cfg.n_scenes - n_validation

    features: Dict[str, Vector] = {}
    labels: Dict[str, str] = {}
    train_captions: List[RawCaption] = []
    validation_captions: List[RawCaption] = []
    for i, scene in enumerate(scenes):
        image_id = f"img{i:05d}"
        features[image_id] = space.features(*scene, noise_rng)
        labels[image_id] = objects[scene[0]]
        split = train_captions if i < n_train else validation_captions
        split.extend(
            RawCaption(image_id=image_id, caption=text)
            for text in scene_captions(objects, attributes, scene, cfg.captions_per_scene)
        )

    vocabulary = build_vocab((tokenize(c.caption) for c in train_captions), cfg.min_count)
    train, _ = build_records(train_captions, features, vocabulary)
    validation, _ = build_records(validation_captions, features, vocabulary)
    logging.info(
        "Generated %d scenes: %d train / %d validation captions, vocabulary %d",
        cfg.n_scenes,
        len(train),
        len(validation),
        len(vocabulary),
    )
    return SyntheticCorpus(
        train=train,
        validation=validation,
        vocabulary=vocabulary,
        features=features,
        train_captions=train_captions,
        validation_captions=validation_captions,
        labels=labels,
        benchmark=similarity_benchmark(space, objects, attributes),
    )
