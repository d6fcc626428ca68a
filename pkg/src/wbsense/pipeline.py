"""End-to-end sensing pipeline over a sequence of frames.

The first L-1 frames only feed the edge-statistic accumulator. From frame
L onward each frame is fully sensed: the head of the frame (the
reference-isolation budget) picks the minimum-energy sub-band, the
optimizer chooses the frame's sensing time, the full sensing record is
re-transformed at its own resolution, and every non-reference sub-band is
labeled white or non-white.

Frame access contract: ``frames[i]`` is a callable ``(duration_s) ->
SpectrumFrame``. A generator may be called more than once for the same
frame with different durations (the isolation-budget view and the full
sensing record); implementations must keep frame-scoped state, in
particular the realized noise variance, fixed across those calls.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import mathkit
from .edgedet import EdgeScanConfig, accumulate_frames, extract_edges, frame_edge_stats, solve_frame_count
from .ged import classify_subbands, threshold_for_target_pd
from .optimizer import build_params, optimal_sensing_time
from .refdet import RefDetConfig, observation_samples, required_tw, select_reference, tw_min
from .sigsynth import ScenarioSpec, SpectrumFrame, draw_noise_variance, synthesize_frame

__all__ = ["DetectorConfig", "FrameReport", "run_pipeline", "scenario_frame_generators"]


@dataclass(frozen=True)
class DetectorConfig:
    """Design-time inputs shared by every pipeline stage."""

    total_bandwidth_hz: float
    s_max: int
    frame_duration_s: float
    edge_snr: float = 0.01
    ref_snr: float = 0.01
    band_snr: float = 0.01
    cr_snr: float = 100.0
    target_edge_pf: float = 0.001
    target_edge_pd: float = 0.999
    target_ref_quality: float = 0.999
    target_pd: float = 0.9
    p_idle: float = 0.8
    edge_mu_convention: str = "asymptotic"
    edge_sense_duration_s: float = 0.0  # 0: use the reference-isolation minimum
    edge_frames: int = 0  # 0: solve from the probability targets

    def __post_init__(self):
        if self.total_bandwidth_hz <= 0 or self.s_max < 2 or self.frame_duration_s <= 0:
            raise ValueError("bandwidth, s_max and frame duration must be positive")
        if not 0 <= self.p_idle <= 1:
            raise ValueError("p_idle must be a probability")

    @property
    def b_min_hz(self) -> float:
        return self.total_bandwidth_hz / self.s_max


@dataclass(frozen=True)
class FrameReport:
    frame_index: int
    layout: object
    reference_index: int
    t_o_s: float
    decisions: list
    realized_throughput_proxy: float


def run_pipeline(frames, config: DetectorConfig):
    """Run warmup edge accumulation then per-frame sensing; one report per
    sensed frame."""
    b = config.total_bandwidth_hz
    refcfg = RefDetConfig(target_quality=config.target_ref_quality, design_snr=config.ref_snr)
    t_wmin = tw_min(b, refcfg)
    t_edge = config.edge_sense_duration_s or t_wmin

    scan = EdgeScanConfig(
        b_min_hz=config.b_min_hz, s_max=config.s_max, frames=2,
        frame_sense_duration_s=t_edge, target_pf=config.target_edge_pf,
        target_pd=config.target_edge_pd, design_snr=config.edge_snr,
    )
    if config.edge_frames:
        n_frames_needed = config.edge_frames
        lam_e = mathkit.chi2_quantile(config.target_edge_pf, n_frames_needed - 1)
    else:
        n_frames_needed, lam_e = solve_frame_count(scan, convention=config.edge_mu_convention)
    scan = replace(scan, frames=n_frames_needed)
    if len(frames) < n_frames_needed:
        raise ValueError(f"pipeline needs at least {n_frames_needed} frames, got {len(frames)}")

    n_eh = scan.half_window_bins
    per_frame = []
    for i in range(n_frames_needed - 1):
        frame = frames[i](t_edge)
        per_frame.append(frame_edge_stats(frame.psd_bins, n_eh))
    stats = accumulate_frames(per_frame)
    del per_frame

    b_min_bins = 2 * n_eh
    layout = extract_edges(stats, lam_e, b_min_bins, b)

    t_w = required_tw(layout, refcfg)
    priors = [(config.p_idle, 1 - config.p_idle)] * layout.count
    rate_idle = math.log2(1 + config.cr_snr)

    reports = []
    t_o_by_reference = {}
    for i in range(n_frames_needed - 1, len(frames)):
        head = frames[i](observation_samples(t_w, b) / b)
        selection = select_reference(head.psd_bins, layout, observation_time_s=t_w)

        if selection.reference_index not in t_o_by_reference:
            params = build_params(layout, selection.reference_index,
                                  frame_duration_s=config.frame_duration_s,
                                  band_snr=config.band_snr, cr_snr=config.cr_snr,
                                  target_pd=config.target_pd, occupancy_priors=priors)
            t_opt = optimal_sensing_time(params, floor_s=max(t_w, t_wmin))
            t_o_by_reference[selection.reference_index] = min(t_opt, config.frame_duration_s)
        t_o = t_o_by_reference[selection.reference_index]

        record = frames[i](observation_samples(t_o, b) / b)
        widths = layout.widths_hz
        b_ref = widths[selection.reference_index]
        thresholds = [
            threshold_for_target_pd(config.target_pd, config.band_snr, t_o,
                                    widths[k], b_ref / widths[k])
            if k != selection.reference_index else float("nan")
            for k in range(layout.count)
        ]
        decisions = classify_subbands(record.psd_bins, layout, selection, thresholds)

        airtime = (config.frame_duration_s - t_o) / config.frame_duration_s
        proxy = airtime * rate_idle * sum(d.is_white for d in decisions)
        reports.append(FrameReport(frame_index=i, layout=layout,
                                   reference_index=selection.reference_index,
                                   t_o_s=t_o, decisions=decisions,
                                   realized_throughput_proxy=proxy))
    return reports


def scenario_frame_generators(spec: ScenarioSpec, n_frames: int, master_seed):
    """Frame generators for a fixed scenario, one independent stream per
    frame; the realized noise variance of a frame is drawn once and shared
    by every call for that frame. ``master_seed`` may be an int, a tuple of
    ints, or a SeedSequence."""
    if isinstance(master_seed, np.random.SeedSequence):
        root = master_seed
    else:
        root = np.random.SeedSequence(master_seed)
    seeds = root.spawn(n_frames)

    def make(seq):
        state = {}

        def gen(duration_s: float) -> SpectrumFrame:
            if "rng" not in state:
                state["rng"] = np.random.default_rng(seq)
                state["sigma2"] = draw_noise_variance(
                    spec.noise_variance, spec.uncertainty_db, state["rng"])
            # signal power stays anchored to the nominal noise level; only
            # the noise floor moves with the realized variance
            scale = spec.noise_variance / state["sigma2"]
            frame_spec = replace(spec, frame_duration_s=duration_s,
                                 noise_variance=state["sigma2"],
                                 snr_linear=tuple(s * scale for s in spec.snr_linear),
                                 uncertainty_db=0.0)
            return synthesize_frame(frame_spec, state["rng"], time_domain=False)

        return gen

    return [make(s) for s in seeds]
