"""Tab-separated text files: similarity benchmarks, labels, vocabularies,
evaluation reports and loss curves."""

import csv
import logging as log
import os
from pathlib import Path
from typing import Dict, Iterable, List, Tuple, Union

from app.config import ENCODING
from app.errors import ParseError
from app.models.epoch_loss import EpochLoss
from app.models.eval_report import EvalReport
from app.models.vocabulary import Vocabulary

REPORT_HEADER = ["metric", "condition", "value", "n_queries", "n_candidates", "seed"]
LOSS_HEADER = ["epoch", "lt", "lv", "total"]

BenchmarkPair = Tuple[str, str, float]


def _ensure_parent(file_path: Union[str, Path]) -> None:
    os.makedirs(Path(file_path).parent, exist_ok=True)


def load_benchmark(file_path: Union[str, Path]) -> List[BenchmarkPair]:
    """Read ``word1<TAB>word2<TAB>score`` rows; ``#`` lines and blank lines are skipped."""
    pairs = []
    with open(file_path, newline="", encoding=ENCODING) as f:
        for line_number, row in enumerate(csv.reader(f, delimiter="\t"), start=1):
            if not row or not "".join(row).strip() or row[0].startswith("#"):
                continue
            if len(row) != 3:
                raise ParseError(file_path, line_number, f"expected 3 columns, got {len(row)}")
            try:
                score = float(row[2])
            except ValueError as e:
                raise ParseError(file_path, line_number, f"score '{row[2]}' is not a number") from e
            pairs.append((row[0].strip().lower(), row[1].strip().lower(), score))
    log.info("Loaded %d benchmark pairs from %s", len(pairs), file_path)
    return pairs


def write_benchmark(file_path: Union[str, Path], pairs: Iterable[BenchmarkPair]) -> None:
    _ensure_parent(file_path)
    with open(file_path, "w", newline="", encoding=ENCODING) as f:
        f.write("# word1\tword2\tscore\n")
        writer = csv.writer(f, delimiter="\t", lineterminator="\n")
        for word1, word2, score in pairs:
            writer.writerow([word1, word2, repr(float(score))])


def load_labels(file_path: Union[str, Path]) -> Dict[str, str]:
    """Read ``image_id<TAB>label`` rows."""
    labels = {}
    with open(file_path, newline="", encoding=ENCODING) as f:
        for line_number, row in enumerate(csv.reader(f, delimiter="\t"), start=1):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(file_path, line_number, f"expected 2 columns, got {len(row)}")
            labels[row[0]] = row[1]
    return labels


def write_labels(file_path: Union[str, Path], labels: Dict[str, str]) -> None:
    _ensure_parent(file_path)
    with open(file_path, "w", newline="", encoding=ENCODING) as f:
        writer = csv.writer(f, delimiter="\t", lineterminator="\n")
        writer.writerows(labels.items())


def save_vocab(file_path: Union[str, Path], vocab: Vocabulary) -> None:
    """One word per line, in index order, sentinels included."""
    _ensure_parent(file_path)
    with open(file_path, "w", encoding=ENCODING, newline="\n") as f:
        f.write(f"# min_count={vocab.min_count}\n")
        for word in vocab.words:
            f.write(word + "\n")


def load_vocab(file_path: Union[str, Path]) -> Vocabulary:
    min_count = 1
    words = []
    with open(file_path, encoding=ENCODING) as f:
        for line in f:
            word = line.rstrip("\n")
            if word.startswith("# min_count="):
                min_count = int(word.split("=", 1)[1])
            elif word:
                words.append(word)
    return Vocabulary(words=words, min_count=min_count)


def append_reports(file_path: Union[str, Path], reports: Iterable[EvalReport]) -> None:
    """Append report rows, writing the header first when the file is new or empty."""
    _ensure_parent(file_path)
    new_file = not os.path.exists(file_path) or os.path.getsize(file_path) == 0
    with open(file_path, "a", newline="", encoding=ENCODING) as f:
        writer = csv.writer(f, delimiter="\t", lineterminator="\n")
        if new_file:
            writer.writerow(REPORT_HEADER)
        for report in reports:
            writer.writerow(
                [
                    report.metric,
                    report.condition,
                    repr(float(report.value)),
                    report.n_queries,
                    report.n_candidates,
                    "" if report.seed is None else report.seed,
                ]
            )


def write_loss_log(file_path: Union[str, Path], rows: Iterable[EpochLoss]) -> None:
    """Overwrite the loss curve with one row per epoch."""
    _ensure_parent(file_path)
    with open(file_path, "w", newline="", encoding=ENCODING) as f:
        writer = csv.writer(f, delimiter="\t", lineterminator="\n")
        writer.writerow(LOSS_HEADER)
        for row in rows:
            writer.writerow([row.epoch, repr(row.lt), repr(row.lv), repr(row.total)])
