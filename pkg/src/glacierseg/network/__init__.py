"""Modified U-Net and its checkpoint container."""

from .checkpoint import load_checkpoint, save_checkpoint
from .unet import ModelConfig, SegmentationOutput, UNet, build_model, forward

__all__ = [
    "ModelConfig", "SegmentationOutput", "UNet", "build_model", "forward",
    "save_checkpoint", "load_checkpoint",
]
