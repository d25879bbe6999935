"""Dysarthric speech augmentation toolkit (python bindings)."""

from dysaug._core import (
    ConfigError,
    DataError,
    NumericError,
    ctc_loss,
    greedy_decode,
    griffin_lim,
    istft,
    pair_scale_factor,
    resample_speed,
    sd_factor,
    stft,
    svd_bases,
    wer,
)

__all__ = [
    "ConfigError",
    "DataError",
    "NumericError",
    "ctc_loss",
    "greedy_decode",
    "griffin_lim",
    "istft",
    "pair_scale_factor",
    "resample_speed",
    "sd_factor",
    "stft",
    "svd_bases",
    "wer",
]
