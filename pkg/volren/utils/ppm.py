"""
Binary PPM (P6) images: "P6\n<width> <height>\n255\n" followed by row-major RGB bytes, top row first, no comments.
"""
from pathlib import Path
from typing import Union

import numpy as np

from volren.errors import DomainError

PPM_MAXVAL = 255


def to_bytes(image: np.ndarray) -> np.ndarray:
    """
    byte = floor(clamp(c, 0, 1) * 255 + 0.5) per channel.
    """
    image = np.asarray(image, dtype=np.float64)
    if np.any(np.isnan(image)):
        raise DomainError("image contains NaN values")
    return np.floor(np.clip(image, 0.0, 1.0) * PPM_MAXVAL + 0.5).astype(np.uint8)


def encode_ppm(image: np.ndarray) -> bytes:
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3:
        raise DomainError(f"image must have shape (height, width, 3), got {image.shape}")
    height, width = image.shape[:2]
    if height < 1 or width < 1:
        raise DomainError(f"image must not be empty, got {width}x{height}")
    header = f"P6\n{width} {height}\n{PPM_MAXVAL}\n".encode("ascii")
    return header + to_bytes(image).tobytes()


def write_ppm(image: np.ndarray, path: Union[str, Path]):
    with open(path, "wb") as f:
        f.write(encode_ppm(image))


def read_ppm(path: Union[str, Path]) -> np.ndarray:
    """
    Read back a P6 file written by write_ppm, as a (height, width, 3) uint8 array.
    """
    data = Path(path).read_bytes()
    magic, size, maxval, payload = data.split(b"\n", 3)
    if magic != b"P6" or int(maxval) != PPM_MAXVAL:
        raise DomainError(f"{path} is not a P6 file with maxval {PPM_MAXVAL}")
    width, height = (int(v) for v in size.split())
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
