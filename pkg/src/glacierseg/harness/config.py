"""Run configuration: plain-text ``key = value`` with a typed schema.

Documented keys (defaults in parentheses):

  data_dir            dataset directory produced by `synth` or `prepare`
  class_name          clean | debris (clean) -- which binary model to train
  loss                ce | dice | boundary | combined | slba (slba)
  alpha               fixed mixing weight for `combined` (0.5)
  theta               boundary-match tolerance in pixels (3)
  boundary_kernel     erosion window for boundary extraction (3)
  base_features       first-stage feature maps (32)
  depth               down/up stages, or `auto`: 4, reduced to 3 when the
                      tile size is below 128 (auto)
  architecture        modified | standard (modified); `standard` is the
                      plain-U-Net baseline: ReLU, no batch norm, no dropout
  dropout_rate        spatial dropout rate of the modified architecture (0.1)
  learning_rate       Adam step size (1e-4)
  epochs              training epochs (250)
  batch_size          samples per optimization step (8)
  augment_probability fraction of training samples randomly transformed (0.15)
  threshold           binarization threshold for metrics (0.5)
  seed                run seed (0)
  out_dir             output directory (runs/<class>_<loss>)
"""

from dataclasses import asdict, dataclass, field, fields

from .. import configfile
from ..errors import InvalidConfigError
from ..geodata.tiling import CLEAN, DEBRIS
from ..losses import LOSS_KINDS


@dataclass
class RunConfig:
    data_dir: str = ""
    class_name: str = "clean"
    loss: str = "slba"
    alpha: float = 0.5
    theta: int = 3
    boundary_kernel: int = 3
    base_features: int = 32
    depth: str = "auto"
    architecture: str = "modified"
    dropout_rate: float = 0.1
    learning_rate: float = 1e-4
    epochs: int = 250
    batch_size: int = 8
    augment_probability: float = 0.15
    threshold: float = 0.5
    seed: int = 0
    out_dir: str = ""

    def validate(self):
        if self.class_name not in ("clean", "debris"):
            raise InvalidConfigError(f"class_name must be clean|debris, got {self.class_name!r}")
        if self.loss not in LOSS_KINDS:
            raise InvalidConfigError(f"loss must be one of {LOSS_KINDS}, got {self.loss!r}")
        if self.architecture not in ("modified", "standard"):
            raise InvalidConfigError(
                f"architecture must be modified|standard, got {self.architecture!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidConfigError(f"alpha must lie in [0,1], got {self.alpha}")
        if self.learning_rate <= 0:
            raise InvalidConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs < 1:
            raise InvalidConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise InvalidConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.depth != "auto":
            try:
                d = int(self.depth)
            except ValueError:
                raise InvalidConfigError(f"depth must be `auto` or an integer, got {self.depth!r}")
            if d < 1:
                raise InvalidConfigError(f"depth must be >= 1, got {d}")
        return self

    @property
    def class_id(self):
        return CLEAN if self.class_name == "clean" else DEBRIS

    def resolve_depth(self, tile_size):
        if self.depth != "auto":
            return int(self.depth)
        return 4 if tile_size >= 128 else 3

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_mapping(cls, values, source="<run config>"):
        values = dict(values)
        casts = {
            "alpha": float, "theta": int, "boundary_kernel": int,
            "base_features": int, "dropout_rate": float, "learning_rate": float,
            "epochs": int, "batch_size": int, "augment_probability": float,
            "threshold": float, "seed": int,
        }
        kwargs = {}
        for f in fields(cls):
            if f.name not in values:
                continue
            raw = values.pop(f.name)
            try:
                kwargs[f.name] = casts.get(f.name, str)(raw)
            except (TypeError, ValueError) as exc:
                raise InvalidConfigError(f"{source}: bad value for {f.name}: {raw!r}") from exc
        if values:
            raise InvalidConfigError(f"{source}: unknown config keys {sorted(values)}")
        return cls(**kwargs).validate()

    @classmethod
    def from_file(cls, path, overrides=None):
        values = configfile.read_config(path)
        if overrides:
            values.update({k: str(v) for k, v in overrides.items() if v is not None})
        return cls.from_mapping(values, source=str(path))
