"""Run manifest: the full record needed to reproduce and evaluate a run."""

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import CheckpointError

FORMAT = "glacierseg.run"
VERSION = 1

# same config + seed reproduce the final validation IoU within this bound
REPRO_TOLERANCE = 1e-3


@dataclass
class RunManifest:
    config: dict
    model_config: dict
    stats_id: str
    split_digest: str
    n_tiles: dict
    history: list = field(default_factory=list)
    status: str = "completed"
    best_epoch: int | None = None
    best_val_iou: float | None = None
    best_checkpoint: str | None = None
    last_checkpoint: str | None = None
    validation_split: str = "val"
    backend: str = ""
    runtime_seconds: float = 0.0
    diagnostics: dict = field(default_factory=dict)
    path: str | None = None  # set on save/load; not serialized

    def to_dict(self):
        return {
            "format": FORMAT,
            "version": VERSION,
            "status": self.status,
            "config": self.config,
            "model_config": self.model_config,
            "stats_id": self.stats_id,
            "split_digest": self.split_digest,
            "n_tiles": self.n_tiles,
            "history": self.history,
            "best_epoch": self.best_epoch,
            "best_val_iou": self.best_val_iou,
            "best_checkpoint": self.best_checkpoint,
            "last_checkpoint": self.last_checkpoint,
            "validation_split": self.validation_split,
            "backend": self.backend,
            "runtime_seconds": self.runtime_seconds,
            "reproducibility_tolerance": {"final_val_iou": REPRO_TOLERANCE},
            "diagnostics": self.diagnostics,
        }

    def save(self, path):
        path = Path(path)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=1)
        self.path = str(path)
        return path

    @classmethod
    def load(cls, path):
        path = Path(path)
        if path.is_dir():
            path = path / "manifest.json"
        if not path.is_file():
            raise CheckpointError(f"no run manifest at {path}")
        with open(path) as f:
            d = json.load(f)
        if d.get("format") != FORMAT:
            raise CheckpointError(f"{path} is not a {FORMAT} file")
        manifest = cls(
            config=d["config"],
            model_config=d["model_config"],
            stats_id=d["stats_id"],
            split_digest=d["split_digest"],
            n_tiles=d["n_tiles"],
            history=d["history"],
            status=d["status"],
            best_epoch=d["best_epoch"],
            best_val_iou=d["best_val_iou"],
            best_checkpoint=d["best_checkpoint"],
            last_checkpoint=d["last_checkpoint"],
            validation_split=d.get("validation_split", "val"),
            backend=d.get("backend", ""),
            runtime_seconds=d.get("runtime_seconds", 0.0),
            diagnostics=d.get("diagnostics", {}),
        )
        manifest.path = str(path)
        return manifest

    def checkpoint_path(self, which="best"):
        name = self.best_checkpoint if which == "best" else self.last_checkpoint
        if name is None:
            raise CheckpointError(f"run manifest records no {which} checkpoint")
        if self.path is None:
            return Path(name)
        return Path(self.path).parent / name
