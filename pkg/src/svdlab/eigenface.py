"""Eigenface training, projection and classification, plus the PERCLOS
drowsiness measure over labeled frame streams.

Training works in the span of the centered training images: the M x M Gram
matrix is decomposed by one of the symmetric backends, the eigenvectors are
lifted back to pixel space and normalized, and each training image is stored
as its coefficient vector in that basis. Everything the classifier needs
round-trips through a small binary container.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyModel,
    EmptyWindow,
    RankDeficiencyWarning,
    RankDeficient,
)
from .matrix import EPS, SymmetricMatrix


@dataclass(frozen=True)
class ImageVector:
    """Grayscale image flattened row-major, intensities in [0, 255]."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if self.width < 1 or self.height < 1 or px.ndim != 1 or px.size != self.width * self.height:
            raise DimensionMismatch(
                f"{self.width}x{self.height} image needs {self.width * self.height} pixels, "
                f"got {px.size}"
            )
        if not np.isfinite(px).all() or px.min() < 0.0 or px.max() > 255.0:
            raise ValueError("pixel values must be finite and within [0, 255]")
        object.__setattr__(self, "pixels", px)


@dataclass
class EigenfaceModel:
    width: int
    height: int
    mean_face: np.ndarray          # pixel-space mean of the training set
    eigenfaces: np.ndarray         # pixel-space orthonormal columns, energy order
    energy_fractions: np.ndarray   # eigenvalue shares of the kept components
    class_projections: np.ndarray  # one coefficient row per training image
    class_labels: list = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.eigenfaces.shape[1]

    @property
    def training_count(self) -> int:
        return self.class_projections.shape[0]


@dataclass(frozen=True)
class ClassificationResult:
    label: str
    coefficient_distance: float
    reconstruction_error: float


def _stack_images(images):
    if len(images) < 2:
        raise ValueError("training needs at least two images")
    w, h = images[0].width, images[0].height
    for img in images:
        if img.width != w or img.height != h:
            raise DimensionMismatch(
                f"all images must share one geometry, got {img.width}x{img.height} "
                f"after {w}x{h}"
            )
    return np.stack([img.pixels for img in images], axis=1)


def train(images, k=None, backend="dc", labels=None) -> EigenfaceModel:
    """Fit an eigenface model on equally-sized images.

    `backend` names any registered symmetric SVD backend. `k` defaults to the
    smallest count capturing 95% of the spectrum energy; requests beyond the
    numerical rank are capped with a RankDeficiencyWarning, and a spectrum
    with no usable direction at all raises RankDeficient.
    """
    from .backends import get_backend

    gamma = _stack_images(images)
    m = gamma.shape[1]
    if labels is None:
        labels = [str(i) for i in range(m)]
    labels = [str(x) for x in labels]
    if len(labels) != m:
        raise ValueError(f"got {len(labels)} labels for {m} images")
    decompose = get_backend(backend)
    mean_face = gamma.mean(axis=1)
    centered = gamma - mean_face[:, None]
    gram = centered.T @ centered / m
    gram = 0.5 * (gram + gram.T)
    result = decompose(SymmetricMatrix(gram))
    lam = result.sigma  # the Gram matrix is PSD, so these are its eigenvalues
    total = float(lam.sum())
    if total == 0.0:
        raise RankDeficient("all training images equal their mean; no spectrum to keep")
    rank = int(np.count_nonzero(lam > m * EPS * lam[0]))
    if rank == 0:
        raise RankDeficient("training spectrum is entirely at noise level")
    energy = lam / total
    if k is None:
        k = int(np.searchsorted(np.cumsum(energy), 0.95) + 1)
        k = min(k, rank)
    else:
        k = int(k)
        if k < 1:
            raise ValueError("k must be at least 1")
        if k > rank:
            warnings.warn(
                f"requested {k} eigenfaces but the numerical rank is {rank}; capping",
                RankDeficiencyWarning,
                stacklevel=2,
            )
            k = rank
    lifted = centered @ result.u[:, :k]
    lifted /= np.sqrt((lifted * lifted).sum(axis=0))
    projections = centered.T @ lifted
    return EigenfaceModel(
        width=images[0].width,
        height=images[0].height,
        mean_face=mean_face,
        eigenfaces=lifted,
        energy_fractions=energy[:k].copy(),
        class_projections=projections,
        class_labels=list(labels),
    )


def project(model: EigenfaceModel, image: ImageVector) -> np.ndarray:
    """Coefficients of the centered image in the eigenface basis."""
    if image.pixels.size != model.mean_face.size:
        raise DimensionMismatch(
            f"image has {image.pixels.size} pixels, model expects {model.mean_face.size}"
        )
    return model.eigenfaces.T @ (image.pixels - model.mean_face)


def reconstruct(model: EigenfaceModel, omega) -> np.ndarray:
    """Centered pixel-space reconstruction from coefficients (add the stored
    mean face to get back to image range)."""
    omega = np.asarray(omega, dtype=np.float64)
    if omega.shape != (model.k,):
        raise DimensionMismatch(f"expected {model.k} coefficients, got {omega.shape}")
    return model.eigenfaces @ omega


def classify(model: EigenfaceModel, image: ImageVector) -> ClassificationResult:
    """Nearest stored training image by coefficient distance, with the
    face-space reconstruction error reported alongside."""
    if model.k == 0 or model.training_count == 0:
        raise EmptyModel("model holds no trained faces")
    omega = project(model, image)
    diffs = model.class_projections - omega[None, :]
    dists = np.sqrt((diffs * diffs).sum(axis=1))
    best = int(np.argmin(dists))
    centered = image.pixels - model.mean_face
    err = float(np.linalg.norm(centered - reconstruct(model, omega)))
    return ClassificationResult(
        label=model.class_labels[best],
        coefficient_distance=float(dists[best]),
        reconstruction_error=err,
    )


# ---------------------------------------------------------------------------
# PGM image files (P2 ascii / P5 binary, 8-bit)

def read_pgm(path) -> ImageVector:
    with open(path, "rb") as fh:
        data = fh.read()
    pos = 0

    def token():
        nonlocal pos
        while pos < len(data):
            ch = data[pos:pos + 1]
            if ch == b"#":
                nl = data.find(b"\n", pos)
                pos = len(data) if nl < 0 else nl + 1
            elif ch.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise ValueError("truncated PGM header")
        return data[start:pos]

    magic = token()
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"not an 8-bit PGM file (magic {magic!r})")
    try:
        width, height, maxval = int(token()), int(token()), int(token())
    except ValueError:
        raise ValueError("malformed PGM header") from None
    if width < 1 or height < 1 or not 0 < maxval <= 255:
        raise ValueError(f"unsupported PGM geometry {width}x{height} maxval {maxval}")
    count = width * height
    if magic == b"P5":
        pos += 1  # single whitespace after maxval
        raster = data[pos:pos + count]
        if len(raster) != count:
            raise ValueError(f"PGM raster holds {len(raster)} bytes, expected {count}")
        px = np.frombuffer(raster, dtype=np.uint8).astype(np.float64)
    else:
        fields = data[pos:].split()
        if len(fields) != count:
            raise ValueError(f"PGM raster holds {len(fields)} samples, expected {count}")
        px = np.array([int(f) for f in fields], dtype=np.float64)
    if px.max(initial=0.0) > maxval:
        raise ValueError("PGM sample exceeds the declared maxval")
    return ImageVector(width=width, height=height, pixels=px)


def write_pgm(path, image: ImageVector, binary: bool = True) -> None:
    px = np.clip(np.rint(image.pixels), 0, 255).astype(np.uint8)
    header = f"P5\n{image.width} {image.height}\n255\n" if binary else (
        f"P2\n{image.width} {image.height}\n255\n"
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        if binary:
            fh.write(px.tobytes())
        else:
            rows = px.reshape(image.height, image.width)
            for row in rows:
                fh.write(" ".join(str(int(v)) for v in row).encode("ascii"))
                fh.write(b"\n")


# ---------------------------------------------------------------------------
# model container

_MAGIC = b"EIGF"
_VERSION = 1


def save_model(model: EigenfaceModel, path) -> None:
    """Serialize to the little-endian binary container (header, mean face,
    eigenfaces, energies, projections, then the label table)."""
    m = model.training_count
    k = model.k
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IIIII", _VERSION, model.width, model.height, m, k))
        fh.write(model.mean_face.astype("<f8").tobytes())
        fh.write(np.ascontiguousarray(model.eigenfaces.T).astype("<f8").tobytes())
        fh.write(model.energy_fractions.astype("<f8").tobytes())
        fh.write(np.ascontiguousarray(model.class_projections).astype("<f8").tobytes())
        for label in model.class_labels:
            raw = label.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)


def load_model(path) -> EigenfaceModel:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != _MAGIC:
        raise ValueError("not an eigenface model file")
    version, width, height, m, k = struct.unpack_from("<IIIII", data, 4)
    if version != _VERSION:
        raise ValueError(f"unsupported model version {version}")
    n = width * height
    pos = 24

    def block(count):
        nonlocal pos
        nbytes = count * 8
        if pos + nbytes > len(data):
            raise ValueError("truncated model file")
        out = np.frombuffer(data, dtype="<f8", count=count, offset=pos).astype(np.float64)
        pos += nbytes
        return out

    mean_face = block(n)
    eigenfaces = block(k * n).reshape(k, n).T.copy()
    energy = block(k)
    projections = block(m * k).reshape(m, k)
    labels = []
    for _ in range(m):
        if pos + 4 > len(data):
            raise ValueError("truncated label table")
        (ln,) = struct.unpack_from("<I", data, pos)
        pos += 4
        labels.append(data[pos:pos + ln].decode("utf-8"))
        pos += ln
    return EigenfaceModel(
        width=width,
        height=height,
        mean_face=mean_face,
        eigenfaces=eigenfaces,
        energy_fractions=energy,
        class_projections=projections,
        class_labels=labels,
    )


# ---------------------------------------------------------------------------
# PERCLOS

OPEN = "open"
CLOSED = "closed"


@dataclass(frozen=True)
class FrameLabelSeries:
    """Timestamped eye-state labels; timestamps in seconds, non-decreasing."""

    timestamps: np.ndarray
    labels: tuple
    window_seconds: float = 180.0

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype=np.float64)
        labels = tuple(self.labels)
        if ts.ndim != 1 or ts.size != len(labels):
            raise DimensionMismatch(
                f"{ts.size} timestamps for {len(labels)} labels"
            )
        if ts.size and (not np.isfinite(ts).all() or np.any(np.diff(ts) < 0.0)):
            raise ValueError("timestamps must be finite and non-decreasing")
        bad = sorted({l for l in labels} - {OPEN, CLOSED})
        if bad:
            raise ValueError(f"labels must be '{OPEN}' or '{CLOSED}', got {bad}")
        if not self.window_seconds > 0.0:
            raise ValueError("window_seconds must be positive")
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "labels", labels)


def perclos(series: FrameLabelSeries) -> float:
    """Percentage of closed-eye frames over the whole series, computed as one
    exact integer ratio."""
    total = len(series.labels)
    if total == 0:
        raise EmptyWindow("no frames in the window")
    closed = sum(1 for l in series.labels if l == CLOSED)
    return (closed * 100) / total


def perclos_windows(series: FrameLabelSeries):
    """PERCLOS per fixed window of `window_seconds`, tumbling from the first
    timestamp. Windows without frames are skipped; a trailing partial window
    still counts. Returns (start, end, percentage) triples."""
    if len(series.labels) == 0:
        return []
    t0 = float(series.timestamps[0])
    w = float(series.window_seconds)
    idx = np.floor((series.timestamps - t0) / w).astype(np.intp)
    out = []
    for i in np.unique(idx):
        mask = idx == i
        total = int(mask.sum())
        closed = sum(1 for m, l in zip(mask, series.labels) if m and l == CLOSED)
        out.append((t0 + i * w, t0 + (i + 1) * w, (closed * 100) / total))
    return out
