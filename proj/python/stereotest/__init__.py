"""Python bindings for the random-dot stereoacuity toolkit."""

from ._core import (
    DisplayProfile,
    StereoError,
    analyze_csv,
    build_level_table,
    decode,
    disparity_arcsec,
    distance_scale_k,
    dot_size_px,
    ground_truth_mask,
    hd_arcsec,
    hd_protocol,
    landis_koch,
    pixel_pitch,
    recode_far,
    recode_near,
    render,
    simulate,
    stimulus_size_px,
    weighted_kappa,
    wilcoxon,
)

__all__ = [
    "DisplayProfile",
    "StereoError",
    "analyze_csv",
    "build_level_table",
    "decode",
    "disparity_arcsec",
    "distance_scale_k",
    "dot_size_px",
    "ground_truth_mask",
    "hd_arcsec",
    "hd_protocol",
    "landis_koch",
    "pixel_pitch",
    "recode_far",
    "recode_near",
    "render",
    "simulate",
    "stimulus_size_px",
    "weighted_kappa",
    "wilcoxon",
]
