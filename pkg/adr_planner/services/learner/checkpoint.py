# services/learner/checkpoint.py
"""
Versioned parameter checkpoints.

An `.npz` archive holding a format version, the metadata document as JSON
text, and each layer's float64 array (shape plus row-major values). Loading
returns arrays bit-identical to the saved ones.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Tuple

import numpy as np

from ...core.config import Config
from ...core.errors import DimensionError
from .network import QNetworkParams


def save_checkpoint(path: Path, params: QNetworkParams, metadata: Dict[str, Any] | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    arrays = {f"w{i}": np.ascontiguousarray(w, dtype=np.float64) for i, w in enumerate(params.weights)}
    arrays.update({f"b{i}": np.ascontiguousarray(b, dtype=np.float64) for i, b in enumerate(params.biases)})
    with path.open("wb") as fh:
        np.savez(
            fh,
            version=np.array(Config.CHECKPOINT_VERSION, dtype=np.int64),
            metadata=np.array(json.dumps(metadata or {}, sort_keys=True)),
            **arrays,
        )
    return path


def load_checkpoint(path: Path) -> Tuple[QNetworkParams, Dict[str, Any]]:
    with np.load(Path(path), allow_pickle=False) as data:
        version = int(data["version"])
        if version != Config.CHECKPOINT_VERSION:
            raise DimensionError(f"Unsupported checkpoint version {version}")
        weights = [data[f"w{i}"].astype(np.float64) for i in range(3)]
        biases = [data[f"b{i}"].astype(np.float64) for i in range(3)]
        metadata = json.loads(str(data["metadata"]))
    return QNetworkParams(weights, biases), metadata
