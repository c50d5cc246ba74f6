"""Synthetic True-FISP-like slices with known ground truth.

Three morphologies are generated on a bright elliptical lumen over a
dark background:

* ``real_clot`` — a solid dark disc (concentric thrombus aggregate) at
  40% of the lumen intensity, with a snug circular clot ROI delimiting
  it, the way an evaluator traces a visible clot;
* ``turbulence`` — a smooth, elongated, shallow attenuation ridge along
  the vessel axis (flow artifact) with an elongated ROI around it;
* ``clean_lumen`` — plain lumen; the probe ROI is a vessel-following
  elongated ellipse.  The vessel is drawn large enough that the probe
  region stays perfectly flat at zero noise (no structure for the
  threshold step to find), while under noise any induced blob follows
  the elongated ROI and fails the shape criterion.

ROI shapes mirror how an evaluator would delineate each finding; the
elongation of non-clot ROIs is what lets the shape criterion reject
noise-driven segmentations.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .classifier import NEGATIVE, POSITIVE
from .errors import InclusionOutsideLumen
from .image_io import GrayImage, StudySlice
from .roi import EllipseRoi, rasterize

KINDS = ("real_clot", "turbulence", "clean_lumen")


@dataclass(frozen=True)
class PhantomSpec:
    kind: str
    seed: int = 0
    image_size: int = 256
    background: float = 0.1
    lumen_center: tuple = (128.0, 128.0)
    lumen_a: float = 96.0
    lumen_b: float = 64.0
    lumen_rot: float = 0.0
    lumen_intensity: float = 0.8
    # real_clot inclusion
    inclusion_center: tuple = (128.0, 128.0)
    inclusion_radius: float = 12.0
    inclusion_ratio: float = 0.4
    roi_snug: float = 1.02  # clot ROI radius / inclusion radius
    # turbulence ridge
    ridge_sigma_along: float = 20.0
    ridge_sigma_across: float = 6.0
    ridge_attenuation: float = 0.18
    ridge_roi_factor: float = 2.6  # ROI semi-axes in ridge sigmas
    # clean-lumen probe ROI (vessel-following)
    probe_a: float = 26.0
    probe_b: float = 8.0
    noise_sigma: float = 0.02

    @staticmethod
    def default(kind, seed=0, noise_sigma=0.02, **overrides):
        """Canonical per-kind geometry.

        The clean-lumen vessel nearly fills the frame so the probe
        region sits far from any boundary-driven enhancement gradients.
        """
        fields = dict(kind=kind, seed=seed, noise_sigma=noise_sigma)
        if kind == "clean_lumen":
            fields.update(lumen_a=126.0, lumen_b=116.0)
        fields.update(overrides)
        return PhantomSpec(**fields)

    def validate(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown phantom kind {self.kind!r}")
        if not (0.0 < self.background < 1.0
                and 0.0 < self.lumen_intensity < 1.0):
            raise ValueError("intensities must lie strictly inside (0, 1)")
        if self.ridge_sigma_along < 3.0 * self.ridge_sigma_across:
            raise ValueError("turbulence ridge must have axis ratio >= 3")
        if not 0.0 < self.ridge_attenuation < 0.25:
            raise ValueError("ridge attenuation must stay below 25%")
        if self.kind == "real_clot" and not self._fits_inside_lumen(
                self.inclusion_radius * self.roi_snug + 1.0):
            raise InclusionOutsideLumen(
                "inclusion disc leaves the lumen ellipse")

    def _fits_inside_lumen(self, margin):
        cx, cy = self.lumen_center
        ix, iy = self.inclusion_center
        dx, dy = ix - cx, iy - cy
        cos_t, sin_t = math.cos(self.lumen_rot), math.sin(self.lumen_rot)
        u = dx * cos_t + dy * sin_t
        v = -dx * sin_t + dy * cos_t
        ea = self.lumen_a - margin
        eb = self.lumen_b - margin
        if ea <= 0 or eb <= 0:
            return False
        return (u / ea) ** 2 + (v / eb) ** 2 <= 1.0


@dataclass(frozen=True)
class PhantomCase:
    spec: PhantomSpec
    study: StudySlice
    lumen_roi: EllipseRoi
    clot_roi: EllipseRoi
    expected: str
    sidecar: dict = field(default_factory=dict)


def _paint_ridge(pixels, lumen_bits, spec):
    n = spec.image_size
    ys, xs = np.mgrid[0:n, 0:n].astype(np.float64)
    cx, cy = spec.inclusion_center
    cos_t = math.cos(spec.lumen_rot)
    sin_t = math.sin(spec.lumen_rot)
    u = (xs - cx) * cos_t + (ys - cy) * sin_t
    v = -(xs - cx) * sin_t + (ys - cy) * cos_t
    atten = spec.ridge_attenuation * np.exp(
        -(u * u) / (2.0 * spec.ridge_sigma_along ** 2)
        - (v * v) / (2.0 * spec.ridge_sigma_across ** 2))
    pixels[lumen_bits] = spec.lumen_intensity * (1.0 - atten[lumen_bits])


def generate(spec):
    """Render one phantom case; deterministic for a fixed spec.

    Returns (study, lumen_roi, clot_roi, expected_verdict).
    """
    spec.validate()
    n = spec.image_size
    lumen_shape = EllipseRoi(cx=spec.lumen_center[0], cy=spec.lumen_center[1],
                             a=spec.lumen_a, b=spec.lumen_b,
                             rot=spec.lumen_rot)
    lumen_bits = rasterize(lumen_shape, n, n).bits

    pixels = np.full((n, n), spec.background, dtype=np.float64)
    pixels[lumen_bits] = spec.lumen_intensity

    cx, cy = spec.inclusion_center
    if spec.kind == "real_clot":
        disc = rasterize(EllipseRoi(cx=cx, cy=cy, a=spec.inclusion_radius,
                                    b=spec.inclusion_radius), n, n).bits
        pixels[disc] = spec.lumen_intensity * spec.inclusion_ratio
        clot_roi = EllipseRoi(cx=cx, cy=cy,
                              a=spec.inclusion_radius * spec.roi_snug,
                              b=spec.inclusion_radius * spec.roi_snug)
        expected = POSITIVE
    elif spec.kind == "turbulence":
        _paint_ridge(pixels, lumen_bits, spec)
        clot_roi = EllipseRoi(
            cx=cx, cy=cy,
            a=spec.ridge_roi_factor * spec.ridge_sigma_along,
            b=spec.ridge_roi_factor * spec.ridge_sigma_across,
            rot=spec.lumen_rot)
        expected = NEGATIVE
    else:
        clot_roi = EllipseRoi(cx=cx, cy=cy, a=spec.probe_a, b=spec.probe_b,
                              rot=spec.lumen_rot)
        expected = NEGATIVE

    if spec.noise_sigma > 0:
        rng = np.random.default_rng(spec.seed)
        pixels = pixels + rng.normal(0.0, spec.noise_sigma, pixels.shape)
    pixels = np.clip(pixels, 0.0, 1.0)

    lumen_roi = EllipseRoi(cx=spec.lumen_center[0], cy=spec.lumen_center[1],
                           a=spec.lumen_a * 0.92, b=spec.lumen_b * 0.92,
                           rot=spec.lumen_rot)
    study = StudySlice(
        image=GrayImage.from_array(pixels),
        source_id=f"phantom_{spec.kind}_{spec.seed}",
        original_bit_depth=16,
        raw_min=0,
        raw_max=65535,
    )
    return study, lumen_roi, clot_roi, expected


def _jittered_spec(kind, rng, seed, noise_sigma):
    rot = rng.uniform(0.0, math.pi)
    if kind == "clean_lumen":
        off = rng.uniform(-4.0, 4.0, size=2)
        return PhantomSpec.default(
            kind, seed=seed, noise_sigma=noise_sigma,
            lumen_rot=rot,
            inclusion_center=(128.0 + off[0], 128.0 + off[1]),
        )
    if kind == "turbulence":
        scale = 1.0 + rng.uniform(-0.2, 0.2)
        off = rng.uniform(-5.0, 5.0, size=2)
        return PhantomSpec.default(
            kind, seed=seed, noise_sigma=noise_sigma,
            lumen_rot=rot,
            lumen_a=96.0 * (1.0 + rng.uniform(-0.08, 0.08)),
            lumen_b=64.0 * (1.0 + rng.uniform(-0.08, 0.08)),
            inclusion_center=(128.0 + off[0], 128.0 + off[1]),
            ridge_sigma_along=20.0 * scale,
            ridge_sigma_across=6.0 * scale,
        )
    scale = 1.0 + rng.uniform(-0.3, 0.3)
    off = rng.uniform(-8.0, 8.0, size=2)
    return PhantomSpec.default(
        kind, seed=seed, noise_sigma=noise_sigma,
        lumen_rot=rot,
        lumen_a=96.0 * (1.0 + rng.uniform(-0.1, 0.1)),
        lumen_b=64.0 * (1.0 + rng.uniform(-0.1, 0.1)),
        inclusion_center=(128.0 + off[0], 128.0 + off[1]),
        inclusion_radius=12.0 * scale,
    )


def generate_corpus(n_per_kind, base_seed, noise_sigma=0.02):
    """n_per_kind labeled cases of each kind with jittered geometry.

    Seeds derive deterministically from base_seed, so the corpus is
    byte-reproducible.
    """
    if n_per_kind < 1:
        raise ValueError("n_per_kind must be >= 1")
    cases = []
    for kind_index, kind in enumerate(KINDS):
        for i in range(n_per_kind):
            seed = base_seed * 1_000_000 + kind_index * 10_000 + i
            rng = np.random.default_rng([base_seed, kind_index, i])
            spec = _jittered_spec(kind, rng, seed, noise_sigma)
            study, lumen_roi, clot_roi, expected = generate(spec)
            sidecar = {
                "roi": {"lumen": lumen_roi.to_json(),
                        "clot": clot_roi.to_json()},
                "expected": expected,
                "spec": {
                    "kind": kind,
                    "seed": seed,
                    "image_size": spec.image_size,
                    "noise_sigma": spec.noise_sigma,
                    "lumen_rot": spec.lumen_rot,
                    "inclusion_radius": spec.inclusion_radius,
                },
            }
            cases.append(PhantomCase(spec=spec, study=study,
                                     lumen_roi=lumen_roi, clot_roi=clot_roi,
                                     expected=expected, sidecar=sidecar))
    return cases
