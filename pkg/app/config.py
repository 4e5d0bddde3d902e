import json
from pathlib import Path
from typing import Final, Dict, Any, List

# Load config from JSON file
CONFIG_PATH: Final[Path] = Path(__file__).parent.parent / "config.json"
with open(CONFIG_PATH, "r", encoding="utf-8") as f:
    config: Dict[str, Any] = json.load(f)

LOG_LEVEL: Final[str] = config.get("LOG_LEVEL", "WARNING")

DATA_DIR: Final[str] = config["DATA_DIR"]
ENCODING: Final[str] = config["ENCODING"]

# File paths
CAPTIONS_PATH: Final[Path] = Path(DATA_DIR) / config["FILES"]["CAPTIONS"]
VAL_CAPTIONS_PATH: Final[Path] = Path(DATA_DIR) / config["FILES"]["VAL_CAPTIONS"]
FEATURES_PATH: Final[Path] = Path(DATA_DIR) / config["FILES"]["FEATURES"]
LABELS_PATH: Final[Path] = Path(DATA_DIR) / config["FILES"]["LABELS"]
BENCHMARK_PATH: Final[Path] = Path(DATA_DIR) / config["FILES"]["BENCHMARK"]
CHECKPOINT_PATH: Final[Path] = Path(DATA_DIR) / config["FILES"]["CHECKPOINT"]
VOCAB_PATH: Final[Path] = Path(DATA_DIR) / config["FILES"]["VOCAB"]
REPORT_PATH: Final[Path] = Path(DATA_DIR) / config["FILES"]["REPORT"]
LOSS_LOG_PATH: Final[Path] = Path(DATA_DIR) / config["FILES"]["LOSS_LOG"]

# Run defaults (lowest precedence layer of RunConfig)
RUN_DEFAULTS: Final[Dict[str, Any]] = config["RUN"]
PRESETS: Final[Dict[str, Dict[str, Any]]] = config["PRESETS"]
SYNTH_DEFAULTS: Final[Dict[str, Any]] = config["SYNTH"]

# Activations
GATE_SLOPE: Final[float] = config["ACTIVATION"]["GATE_SLOPE"]
CLIP_LO: Final[float] = config["ACTIVATION"]["CLIP_LO"]
CLIP_HI: Final[float] = config["ACTIVATION"]["CLIP_HI"]

# Adam
ADAM_BETA1: Final[float] = config["ADAM"]["BETA1"]
ADAM_BETA2: Final[float] = config["ADAM"]["BETA2"]
ADAM_EPS: Final[float] = config["ADAM"]["EPS"]

# Training
INIT_SCALE: Final[float] = config["TRAINING"]["INIT_SCALE"]
PROB_FLOOR: Final[float] = config["TRAINING"]["PROB_FLOOR"]
KINK_MARGIN: Final[float] = config["TRAINING"]["KINK_MARGIN"]

# Ridge baseline
RIDGE_LAMBDA: Final[float] = config["RIDGE"]["LAMBDA"]
RIDGE_LAMBDA_GRID: Final[List[float]] = config["RIDGE"]["LAMBDA_GRID"]

# Evaluation
RETRIEVAL_K: Final[int] = config["EVAL"]["RETRIEVAL_K"]
PARAPHRASE_K: Final[int] = config["EVAL"]["PARAPHRASE_K"]
GROUP_SIZE: Final[int] = config["EVAL"]["GROUP_SIZE"]
MIN_COVERED_PAIRS: Final[int] = config["EVAL"]["MIN_COVERED_PAIRS"]
NEIGHBORS: Final[int] = config["EVAL"]["NEIGHBORS"]
NEIGHBOR_QUERIES: Final[int] = config["EVAL"]["NEIGHBOR_QUERIES"]

# Gradient check
GRADCHECK: Final[Dict[str, Any]] = config["GRADCHECK"]
GRADCHECK_EPSILON: Final[float] = GRADCHECK["EPSILON"]
GRADCHECK_TOLERANCE: Final[float] = GRADCHECK["TOLERANCE"]
GRADCHECK_COORDS: Final[int] = GRADCHECK["COORDS_PER_TENSOR"]
GRADCHECK_MAX_DIM: Final[int] = GRADCHECK["MAX_DIM"]
