"""End-to-end aliasing removal and the spectral metric used to judge it."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import spectral
from .edges import (PeakinessConfig, SOBEL_NORM, accumulate_peakiness,
                    mask_to_image, sobel_gradient, thin, threshold_edges)
from .fragments import Fragment, FragmentConfig, dump_fragments, extract_fragments
from .raster import Image, band_average, save_image
from .refine import (CleaningConfig, clean_short_branches, dump_junctions,
                     reduce_waving_detailed, remove_protruding_pixels)
from .spectral import FilterParams, fft, filter_strength, pad_signal
from .chains import trace_chains
from .upsample import upsample_bilinear, upsample_catmull_rom


@dataclass(frozen=True)
class PipelineConfig:
    """Every tunable constant of the pipeline, with its default value."""

    scale: int = 4
    upsampler: str = "catmull-rom"  # "catmull-rom", "bilinear" or "none"
    peakiness: PeakinessConfig = field(default_factory=PeakinessConfig)
    cleaning: CleaningConfig = field(default_factory=CleaningConfig)
    s_d: float = 0.4
    filter_params: FilterParams = field(default_factory=FilterParams)
    grad_norm: float = SOBEL_NORM
    dump_dir: Path | None = None

    def fragment_config(self) -> FragmentConfig:
        return FragmentConfig(s_d=self.s_d, scale=self.scale)


@dataclass
class FragmentRecord:
    index: int
    fragment: Fragment
    s_f: int
    status: str  # "filtered" or a skip reason


@dataclass
class PipelineReport:
    """Per-fragment outcome plus stage statistics, printable as text."""

    edge_pixels: int
    chain_count: int
    waving_sweeps: int
    records: list[FragmentRecord]

    @property
    def fragment_count(self) -> int:
        return len(self.records)

    @property
    def filtered(self) -> list[FragmentRecord]:
        return [r for r in self.records if r.status == "filtered"]

    @property
    def skipped(self) -> list[FragmentRecord]:
        return [r for r in self.records if r.status != "filtered"]

    def to_text(self) -> str:
        lines = [
            f"edge_pixels={self.edge_pixels}",
            f"chain_count={self.chain_count}",
            f"waving_sweeps={self.waving_sweeps}",
            f"fragment_count={self.fragment_count}",
            f"filtered_count={len(self.filtered)}",
            f"skipped_count={len(self.skipped)}",
        ]
        for rec in self.records:
            frag = rec.fragment
            (x0, y0), (xl, yl) = frag.endpoints
            l0 = "undefined" if frag.l0 is None else f"{frag.l0:.6g}"
            lines.append(
                f"fragment id={rec.index} orientation={frag.orientation} "
                f"x0={x0} y0={y0} xl={xl} yl={yl} n_b={frag.n_b} "
                f"l0={l0} s_f={rec.s_f} status={rec.status}"
            )
        return "\n".join(lines) + "\n"


def _fragment_status(fragment: Fragment, params: FilterParams) -> tuple[int, str]:
    if fragment.l0 is None:
        return 0, "skipped-undefined-period"
    if fragment.l0 < 2.0:
        return 0, "skipped-period-below-nyquist"
    if fragment.n_b < 4:
        return 0, "skipped-too-short"
    s_f = filter_strength(fragment.n_b, fragment.l0, params)
    if s_f == 0:
        return 0, "skipped-zero-strength"
    return s_f, "filtered"


def run_pipeline(image: Image, cfg: PipelineConfig | None = None
                 ) -> tuple[Image, PipelineReport]:
    """Upsample (optionally), detect and refine edges, filter fragments.

    Returns the filtered image and a report; pixels outside every
    filtered profile are bit-identical to the plain upsampled image.
    """
    if cfg is None:
        cfg = PipelineConfig()
    if cfg.upsampler == "catmull-rom":
        work = upsample_catmull_rom(image, cfg.scale)
    elif cfg.upsampler == "bilinear":
        work = upsample_bilinear(image, cfg.scale)
    elif cfg.upsampler == "none":
        work = image.copy()
    else:
        raise ValueError(f"unknown upsampler {cfg.upsampler!r}")

    dump = cfg.dump_dir
    if dump is not None:
        dump = Path(dump)
        dump.mkdir(parents=True, exist_ok=True)

    grad = sobel_gradient(work, cfg.grad_norm)
    peak = accumulate_peakiness(grad, cfg.peakiness)
    mask = threshold_edges(peak, cfg.peakiness.e_min)
    if dump is not None:
        save_image(mask_to_image(mask), dump / "edges_thresholded.pgm")
    mask = thin(mask)
    if dump is not None:
        save_image(mask_to_image(mask), dump / "edges_thinned.pgm")
    mask = clean_short_branches(mask, cfg.cleaning.l_min)
    mask = remove_protruding_pixels(mask)
    if dump is not None:
        save_image(mask_to_image(mask), dump / "edges_cleaned.pgm")
    waving = reduce_waving_detailed(mask, cfg.cleaning)
    mask = waving.mask
    if dump is not None:
        save_image(mask_to_image(mask), dump / "edges_final.pgm")
        (dump / "junctions.txt").write_text(dump_junctions(waving))

    chains = trace_chains(mask)
    fragment_cfg = cfg.fragment_config()
    fragments: list[Fragment] = []
    for chain in chains:
        fragments.extend(extract_fragments(chain, fragment_cfg))
    if dump is not None:
        (dump / "fragments.txt").write_text(dump_fragments(fragments))

    spectrum_lines: list[str] = []

    def sink_for(index: int):
        def sink(band, offset, mags, mask_vals, out_mags, m):
            for f, (mag, mv, out) in enumerate(zip(mags, mask_vals, out_mags)):
                spectrum_lines.append(
                    f"fragment={index} band={band} offset={offset} f={f} "
                    f"mag={mag:.9g} mask={mv:.9g} out={out:.9g} m={m:.9g}"
                )
        return sink

    records = []
    for index, fragment in enumerate(fragments):
        s_f, status = _fragment_status(fragment, cfg.filter_params)
        if status == "filtered":
            sink = sink_for(index) if dump is not None else None
            spectral.filter_fragment(work, fragment, cfg.filter_params,
                                     spectrum_sink=sink)
        records.append(FragmentRecord(index, fragment, s_f, status))

    if dump is not None:
        (dump / "spectra.txt").write_text(
            "\n".join(spectrum_lines) + ("\n" if spectrum_lines else ""))

    report = PipelineReport(
        edge_pixels=int(mask.sum()),
        chain_count=len(chains),
        waving_sweeps=waving.sweeps,
        records=records,
    )
    return work, report


def aliasing_energy(image: Image, fragment: Fragment) -> float:
    """Fraction of a profile's AC spectral energy near the aliasing peak.

    The fragment's own (offset 0) profile is padded and transformed;
    the ratio is the energy in bins whose folded frequency lies within
    [0.8 f0, 1.2 f0] over the energy of all non-DC bins.  Multi-band
    images are measured on the band average.
    """
    if fragment.l0 is None:
        raise ValueError("fragment period is undefined")
    source = image if image.bands == 1 else band_average(image)
    xs, ys = spectral.profile_coords(fragment, 0)
    values = source.planes[0][ys, xs]
    padded = pad_signal(values)
    spectrum = fft(padded.values)
    n_c = padded.n_c
    f0 = n_c / fragment.l0
    power = np.abs(spectrum) ** 2
    freqs = np.arange(n_c)
    folded = np.minimum(freqs, n_c - freqs)
    in_band = (folded >= 0.8 * f0) & (folded <= 1.2 * f0) & (freqs >= 1)
    total = float(power[1:].sum())
    if total == 0.0:
        return 0.0
    return float(power[in_band].sum()) / total
