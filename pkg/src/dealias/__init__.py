"""Edge-directed spectral removal of raster aliasing in upsampled images."""

from .chains import Chain, Run, decompose_runs, trace_chains
from .edges import (PeakinessConfig, SOBEL_NORM, accumulate_peakiness,
                    detect_edges, mask_to_image, image_to_mask, scan_lines,
                    sobel_gradient, thin, threshold_edges)
from .fragments import (Fragment, FragmentConfig, estimate_period,
                        extract_fragments, is_approximately_straight)
from .pipeline import (PipelineConfig, PipelineReport, aliasing_energy,
                       run_pipeline)
from .raster import (Image, RasterError, TruncatedFileError,
                     UnsupportedFormatError, ZeroDimensionError,
                     band_average, load_image, save_image)
from .refine import (CleaningConfig, Junction, clean_short_branches,
                     junction_move_limit, reduce_waving,
                     reduce_waving_detailed, remove_protruding_pixels)
from .spectral import (BrightnessProfile, FilterParams, PaddedSignal,
                       extract_profile, fft, filter_fragment, filter_strength,
                       flatten_peak, ifft, mask_function, pad_signal,
                       weight_function, weighted_mean)
from .synth import EdgeLine, SyntheticSpec, generate_synthetic
from .upsample import upsample_bilinear, upsample_catmull_rom

__version__ = "0.1.0"

__all__ = [
    "Chain", "Run", "decompose_runs", "trace_chains",
    "PeakinessConfig", "SOBEL_NORM", "accumulate_peakiness", "detect_edges",
    "mask_to_image", "image_to_mask", "scan_lines", "sobel_gradient",
    "thin", "threshold_edges",
    "Fragment", "FragmentConfig", "estimate_period", "extract_fragments",
    "is_approximately_straight",
    "PipelineConfig", "PipelineReport", "aliasing_energy", "run_pipeline",
    "Image", "RasterError", "TruncatedFileError", "UnsupportedFormatError",
    "ZeroDimensionError", "band_average", "load_image", "save_image",
    "CleaningConfig", "Junction", "clean_short_branches",
    "junction_move_limit", "reduce_waving", "reduce_waving_detailed",
    "remove_protruding_pixels",
    "BrightnessProfile", "FilterParams", "PaddedSignal", "extract_profile",
    "fft", "filter_fragment", "filter_strength", "flatten_peak", "ifft",
    "mask_function", "pad_signal", "weight_function", "weighted_mean",
    "EdgeLine", "SyntheticSpec", "generate_synthetic",
    "upsample_bilinear", "upsample_catmull_rom",
    "__version__",
]
