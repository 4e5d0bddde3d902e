"""Uniform read-only views of trained models for the evaluation protocols.

Both predictors expose the same four operations over token sequences:
``predict_image``, ``encode`` (sentence representation for paraphrase
retrieval), ``project_word`` and ``word_vector``.
"""

from typing import Sequence, Union

from app.imaginet.baseline import bow, predict
from app.imaginet.network import encode_visual, predict_image, project_word
from app.imaginet.numcore import Vector
from app.models.activation_config import DEFAULT_ACTIVATION, ActivationConfig
from app.models.imaginet_params import ImaginetParams
from app.models.linreg_params import LinRegParams


class ImaginetPredictor:
    """Two-pathway model; sentences are encoded by their final visual state."""

    name = "imaginet"

    def __init__(
        self,
        params: ImaginetParams,
        end_index: int,
        end_in_word_projection: bool = False,
        act: ActivationConfig = DEFAULT_ACTIVATION,
    ):
        self.params = params
        self.end_index = end_index
        self.end_in_word_projection = end_in_word_projection
        self.act = act

    @property
    def vocab_size(self) -> int:
        return self.params.vocab_size

    @property
    def image_dim(self) -> int:
        return self.params.image_dim

    def predict_image(self, tokens: Sequence[int]) -> Vector:
        return predict_image(self.params, tokens, self.act)

    def encode(self, tokens: Sequence[int]) -> Vector:
        return encode_visual(self.params, tokens, self.act)

    def project_word(self, token: int) -> Vector:
        end_index = self.end_index if self.end_in_word_projection else None
        return project_word(self.params, token, end_index, self.act)

    def word_vector(self, token: int) -> Vector:
        """Embedding column shared by both pathways."""
        return self.params.We[:, token].copy()


class LinRegPredictor:
    """Ridge baseline; every operation sees only the bag of words."""

    name = "linreg"

    def __init__(self, params: LinRegParams, end_index: int):
        self.params = params
        self.end_index = end_index

    @property
    def vocab_size(self) -> int:
        return self.params.vocab_size

    @property
    def image_dim(self) -> int:
        return self.params.image_dim

    def predict_image(self, tokens: Sequence[int]) -> Vector:
        return predict(self.params, self.encode(tokens))

    def encode(self, tokens: Sequence[int]) -> Vector:
        return bow(tokens, self.params.vocab_size, self.end_index)

    def project_word(self, token: int) -> Vector:
        return self.predict_image([token])

    def word_vector(self, token: int) -> Vector:
        return self.params.word_vector(token)


Predictor = Union[ImaginetPredictor, LinRegPredictor]


def make_predictor(
    params: Union[ImaginetParams, LinRegParams],
    end_index: int,
    end_in_word_projection: bool = False,
) -> Predictor:
    if isinstance(params, LinRegParams):
        return LinRegPredictor(params, end_index)
    return ImaginetPredictor(params, end_index, end_in_word_projection)
