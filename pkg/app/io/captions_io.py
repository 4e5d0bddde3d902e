"""Caption files: JSON Lines with an "id" and a "caption" per line."""

import json
import logging as log
import os
from pathlib import Path
from typing import Iterable, List, Union

from app.config import ENCODING
from app.errors import ParseError
from app.models.raw_caption import RawCaption

CAPTION_FIELDS = {"id", "caption"}


def _parse_line(path: Union[str, Path], line_number: int, line: str) -> RawCaption:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise ParseError(path, line_number, f"invalid JSON ({e.msg})") from e
    if not isinstance(obj, dict) or set(obj) != CAPTION_FIELDS:
        raise ParseError(path, line_number, 'expected an object with exactly "id" and "caption"')
    if not isinstance(obj["id"], str) or not isinstance(obj["caption"], str):
        raise ParseError(path, line_number, '"id" and "caption" must be strings')
    return RawCaption(image_id=obj["id"], caption=obj["caption"])


def load_captions(file_path: Union[str, Path]) -> List[RawCaption]:
    """Read every caption; blank lines are ignored, bad lines raise ParseError."""
    captions = []
    with open(file_path, "rb") as f:
        for line_number, raw_line in enumerate(f, start=1):
            try:
                line = raw_line.decode(ENCODING)
            except UnicodeDecodeError as e:
                raise ParseError(file_path, line_number, f"invalid {ENCODING} ({e.reason})") from e
            if not line.strip():
                continue
            captions.append(_parse_line(file_path, line_number, line))
    log.info("Loaded %d captions from %s", len(captions), file_path)
    return captions


def write_captions(file_path: Union[str, Path], captions: Iterable[RawCaption]) -> int:
    """Overwrite ``file_path`` with one JSON object per caption."""
    os.makedirs(Path(file_path).parent, exist_ok=True)
    count = 0
    with open(file_path, "w", encoding=ENCODING, newline="\n") as f:
        for raw in captions:
            f.write(json.dumps({"id": raw.image_id, "caption": raw.caption}, ensure_ascii=False))
            f.write("\n")
            count += 1
    return count
