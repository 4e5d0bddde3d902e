from enum import Enum


class ModelVariant(Enum):
    """Named settings of the loss mixing weight alpha."""

    VISUAL = "visual"
    TEXTUAL = "textual"
    MULTITASK = "multitask"

    @property
    def alpha(self) -> float:
        return _ALPHAS[self]


_ALPHAS = {
    ModelVariant.VISUAL: 0.0,
    ModelVariant.TEXTUAL: 1.0,
    ModelVariant.MULTITASK: 0.1,
}
