"""Security-region maps over the (theta, phi) square at fixed p00.

The scanner classifies every grid cell with the closed-form margins,
locates margin zero crossings by bisection, and writes CSV and binary
PGM images (0 = insecure, 255 = secure, 128 = on the boundary band;
image row 0 corresponds to the maximum phi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .security import margin_arrays
from .states import BOUNDARY_BAND, werner

__all__ = [
    "GridSpec",
    "RegionGrid",
    "scan_region",
    "find_werner_ck_threshold",
    "find_boundary_curve",
    "werner_ck_margin",
    "write_csv",
    "write_pgm",
    "VERDICTS",
]

VERDICTS = ("ck", "ad_incoherent", "ad_coherent")

# bit positions of the per-cell classification mask
_MASK_BITS = ("ck", "ad_incoherent", "ad_coherent", "distillable", "werner_proximal")


@dataclass(frozen=True)
class GridSpec:
    """Inclusive-endpoint grid over the angle square at fixed p00."""

    p00: float
    n_theta: int = 256
    n_phi: int = 256
    theta_min: float = 0.0
    theta_max: float = math.pi / 2
    phi_min: float = 0.0
    phi_max: float = math.pi / 2
    analysis_mode: bool = False
    werner_band: float = 0.02

    def __post_init__(self) -> None:
        low = 0.0 if self.analysis_mode else 0.5
        if not low < self.p00 <= 1.0:
            raise ValueError(
                f"p00 must lie in ({low}, 1]"
                + ("" if self.analysis_mode else " (pass analysis mode to scan below 1/2)")
                + f", got {self.p00}"
            )
        if self.n_theta < 2 or self.n_phi < 2:
            raise ValueError("need at least 2 grid points per axis")
        if not 0.0 <= self.theta_min < self.theta_max <= math.pi / 2:
            raise ValueError("theta range must be ordered within [0, pi/2]")
        if not 0.0 <= self.phi_min < self.phi_max <= math.pi / 2:
            raise ValueError("phi range must be ordered within [0, pi/2]")

    @property
    def theta(self) -> np.ndarray:
        return np.linspace(self.theta_min, self.theta_max, self.n_theta)

    @property
    def phi(self) -> np.ndarray:
        return np.linspace(self.phi_min, self.phi_max, self.n_phi)


@dataclass(frozen=True)
class RegionGrid:
    """Classified grid: margins and verdict bitmask indexed [i_phi, i_theta]."""

    spec: GridSpec
    theta: np.ndarray
    phi: np.ndarray
    margins: dict[str, np.ndarray]
    werner_distance: np.ndarray
    bitmask: np.ndarray

    def verdict(self, name: str) -> np.ndarray:
        """Boolean secure mask for one condition."""
        return self.margins[name] > BOUNDARY_BAND

    def boundary(self, name: str) -> np.ndarray:
        return np.abs(self.margins[name]) <= BOUNDARY_BAND

    def fraction(self, name: str) -> float:
        return float(self.verdict(name).mean())


def _angle_weights(p00: float, theta: np.ndarray, phi: np.ndarray):
    t, f = np.meshgrid(theta, phi)
    rest = 1.0 - p00
    cos_phi_sq = np.cos(f) ** 2
    p01 = rest * np.cos(t) ** 2 * cos_phi_sq
    p10 = rest * np.sin(t) ** 2 * cos_phi_sq
    p11 = rest * np.sin(f) ** 2
    return np.full_like(p01, p00), p01, p10, p11


def scan_region(spec: GridSpec) -> RegionGrid:
    """Classify every cell of the grid.

    Cells are evaluated with the elementwise margin formulas, so the
    result is identical to per-cell classification in any order.
    """
    p00, p01, p10, p11 = _angle_weights(spec.p00, spec.theta, spec.phi)
    margins = margin_arrays(p00, p01, p10, p11)
    w = (1.0 - spec.p00) / 3.0
    werner_distance = np.max(
        np.abs(np.stack([p01 - w, p10 - w, p11 - w])), axis=0
    )
    bitmask = np.zeros(p01.shape, dtype=np.uint8)
    for bit, name in enumerate(_MASK_BITS):
        if name == "werner_proximal":
            mask = werner_distance <= spec.werner_band
        else:
            mask = margins[name] > BOUNDARY_BAND
        bitmask |= (mask.astype(np.uint8)) << bit
    return RegionGrid(
        spec=spec,
        theta=spec.theta,
        phi=spec.phi,
        margins={k: margins[k] for k in ("ck", "ad_incoherent", "ad_coherent", "distillable")},
        werner_distance=werner_distance,
        bitmask=bitmask,
    )


def werner_ck_margin(p00: float) -> float:
    """CK margin I_AB - I_BE of the Werner state with dominant weight p00."""
    state = werner(p00)
    m = margin_arrays(state.p00, state.p01, state.p10, state.p11)
    return float(m["ck"])


def find_werner_ck_threshold_bracket(tolerance: float = 1e-6) -> tuple[float, float]:
    """Final bisection bracket around the Werner CK sign change."""
    if tolerance < 1e-10:
        raise ValueError("tolerance must be at least 1e-10")
    low, high = 0.5 + 1e-9, 1.0 - 1e-9
    f_low, f_high = werner_ck_margin(low), werner_ck_margin(high)
    if not (f_low < 0.0 < f_high):
        raise AssertionError("CK margin does not change sign on the Werner bracket")
    while high - low > tolerance:
        mid = 0.5 * (low + high)
        if werner_ck_margin(mid) > 0.0:
            high = mid
        else:
            low = mid
    return low, high


def find_werner_ck_threshold(tolerance: float = 1e-6) -> float:
    """Bisect the Werner CK margin's sign change on p00 in (1/2, 1)."""
    low, high = find_werner_ck_threshold_bracket(tolerance)
    return 0.5 * (low + high)


def _margin_at(p00: float, theta: float, phi: float, verdict: str) -> float:
    rest = 1.0 - p00
    cp = math.cos(phi) ** 2
    p01 = rest * math.cos(theta) ** 2 * cp
    p10 = rest * math.sin(theta) ** 2 * cp
    p11 = rest * math.sin(phi) ** 2
    return float(margin_arrays(p00, p01, p10, p11)[verdict])


def find_boundary_curve(
    spec: GridSpec, verdict: str, tolerance: float = 1e-6
) -> list[np.ndarray]:
    """Per phi row, the theta values where the chosen margin crosses zero.

    Crossings are bracketed by adjacent grid cells with opposite margin
    signs and bisected to the requested theta tolerance.  Rows without a
    sign change yield empty arrays.
    """
    if verdict not in VERDICTS:
        raise ValueError(f"verdict must be one of {VERDICTS}, got {verdict!r}")
    grid = scan_region(spec)
    rows: list[np.ndarray] = []
    for i, phi in enumerate(grid.phi):
        margins = grid.margins[verdict][i]
        crossings = []
        for j in range(len(grid.theta) - 1):
            a, b = float(margins[j]), float(margins[j + 1])
            if a == 0.0 or a * b >= 0.0:
                continue
            lo, hi = float(grid.theta[j]), float(grid.theta[j + 1])
            f_lo = a
            while hi - lo > tolerance:
                mid = 0.5 * (lo + hi)
                f_mid = _margin_at(spec.p00, mid, float(phi), verdict)
                if f_mid == 0.0:
                    lo = hi = mid
                elif (f_lo < 0.0) == (f_mid < 0.0):
                    lo, f_lo = mid, f_mid
                else:
                    hi = mid
            crossings.append(0.5 * (lo + hi))
        rows.append(np.array(crossings))
    return rows


def write_csv(grid: RegionGrid, path, header: str) -> None:
    """Row-major dump (phi outer, theta inner): angles, margins, bitmask."""
    lines = [f"# {header}"]
    lines.append(
        "theta,phi,ck_margin,ad_incoherent_margin,ad_coherent_margin,"
        "distillable_margin,werner_distance,bitmask"
    )
    names = ("ck", "ad_incoherent", "ad_coherent", "distillable")
    for i, phi in enumerate(grid.phi):
        for j, theta in enumerate(grid.theta):
            values = [theta, phi] + [grid.margins[n][i, j] for n in names]
            values.append(grid.werner_distance[i, j])
            row = ",".join(f"{v:.17g}" for v in values)
            lines.append(f"{row},{grid.bitmask[i, j]}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def write_pgm(grid: RegionGrid, verdict: str, path, header: str) -> None:
    """Binary PGM of one verdict; row 0 is the maximum-phi row."""
    if verdict not in VERDICTS:
        raise ValueError(f"verdict must be one of {VERDICTS}, got {verdict!r}")
    pixels = np.where(grid.verdict(verdict), 255, 0).astype(np.uint8)
    pixels[grid.boundary(verdict)] = 128
    pixels = pixels[::-1]  # phi max at image row 0
    height, width = pixels.shape
    preamble = (
        f"P5\n# {header}\n# verdict={verdict} 0=insecure 255=secure 128=boundary,"
        f" row 0 = phi max\n{width} {height}\n255\n"
    )
    with open(path, "wb") as fh:
        fh.write(preamble.encode("ascii"))
        fh.write(pixels.tobytes())
