"""The 8-band multispectral stack every raster in this package carries."""

from dataclasses import dataclass

from ..errors import BandMismatchError


@dataclass(frozen=True)
class BandSpec:
    index: int
    name: str
    description: str


LANDSAT7_BANDS = (
    BandSpec(0, "B1", "Blue"),
    BandSpec(1, "B2", "Green"),
    BandSpec(2, "B3", "Red"),
    BandSpec(3, "B4", "Near Infrared"),
    BandSpec(4, "B5", "Shortwave Infrared 1"),
    BandSpec(5, "B6_VCID_1", "Low-gain Thermal Infrared"),
    BandSpec(6, "B6_VCID_2", "High-gain Thermal Infrared"),
    BandSpec(7, "B7", "Shortwave Infrared 2"),
)

NUM_BANDS = len(LANDSAT7_BANDS)

BAND_NAMES = tuple(b.name for b in LANDSAT7_BANDS)


def check_band_count(channels, what="raster"):
    if channels != NUM_BANDS:
        raise BandMismatchError(
            f"{what} has {channels} channels, expected {NUM_BANDS} "
            f"({', '.join(BAND_NAMES)})"
        )
