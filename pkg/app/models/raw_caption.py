from dataclasses import dataclass


@dataclass(frozen=True)
class RawCaption:
    """
    One line of a captions file, before tokenization.

    Attributes:
        image_id (str): Identifier of the described image.
        caption (str): Caption text.
    """

    image_id: str
    caption: str
