"""Scaling-law calculators behind the accounting rules.

Three largely independent relations, each with its constants exposed in a
single config object so rule sets and what-if analyses can override them:

1. loss <-> compute: training loss falls as a power law in compute,
   L ~ C**(-alpha) with alpha ~= 0.15 around current frontier scale.  The
   inverse direction answers "how much more compute buys an r-fold loss
   improvement": r**(-1/alpha).  With loss measurement noise at about 1%, a
   2% loss shift is the smallest reliably detectable capability change,
   which puts the minimum detectable fine-tune at 0.98**(-1/0.15) - 1
   ~= 14.4% of original training compute.

2. compute-optimal inference: the per-request inference budget that a
   training run of size C is tuned for grows as k * sqrt(C), calibrated at
   k = 0.1 so a 1e24 FLOP run sits at 1e11 FLOP per request.

3. inference-scaling equivalence: spending more than the optimal inference
   budget buys capability as if the model had been trained longer.  The
   exchange rate is an empirical piecewise-linear table from excess
   inference OOMs to training-equivalent OOMs, flat beyond the last anchor
   (measurements stop there; no extrapolation).  Math/coding tasks verify
   cheaply, so their table dominates the general one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .amounts import ComputeAmount
from .lineage import CapabilityDomain, InferenceProfile


class DomainError(ValueError):
    """Input outside a calculator's mathematical domain."""


@dataclass(frozen=True, order=True)
class OomValue:
    """A non-negative distance in orders of magnitude (log10 units)."""

    ooms: float

    def __post_init__(self) -> None:
        v = self.ooms
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise DomainError(f"OOM value must be a number: {v!r}")
        if math.isnan(v) or math.isinf(v) or v < 0:
            raise DomainError(f"OOM value must be finite and >= 0: {v!r}")
        object.__setattr__(self, "ooms", float(v))


def _as_anchor_table(anchors) -> tuple:
    table = tuple((float(x), float(y)) for x, y in anchors)
    if not table or table[0] != (0.0, 0.0):
        raise DomainError("anchor table must start at (0, 0)")
    xs = [x for x, _ in table]
    ys = [y for _, y in table]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise DomainError("anchor x values must be strictly increasing")
    if any(b < a for a, b in zip(ys, ys[1:])):
        raise DomainError("anchor y values must be non-decreasing")
    if any(math.isinf(v) or math.isnan(v) for v in xs + ys):
        raise DomainError("anchor values must be finite")
    return table


# General capability: 2-3 extra inference OOMs observed worth ~2 training OOMs.
DEFAULT_GENERAL_ANCHORS = ((0.0, 0.0), (2.5, 2.0))
# Math/coding: cheap verification keeps scaling useful longer, 5-6 extra
# OOMs worth ~3-4 training OOMs.
DEFAULT_MATH_CODING_ANCHORS = ((0.0, 0.0), (2.5, 2.0), (5.5, 3.5))
# Best-of-N answer sampling on coding tasks: each 10x in samples buys about
# what 5x training compute would, measured out to ~1000x samples.
BEST_OF_N_SAMPLING_ANCHORS = (
    (0.0, 0.0),
    (3.0, 3.0 * math.log10(5.0)),
)

ANCHOR_PRESETS = {
    "general": DEFAULT_GENERAL_ANCHORS,
    "math-coding": DEFAULT_MATH_CODING_ANCHORS,
    "best-of-n-sampling": BEST_OF_N_SAMPLING_ANCHORS,
}


def _interp(x: float, table: tuple) -> float:
    xs = [p[0] for p in table]
    ys = [p[1] for p in table]
    return float(np.interp(x, xs, ys))


@dataclass(frozen=True)
class ScalingConfig:
    """All tunable scaling constants in one place.

    Defaults reproduce the published calibration; analyses override fields
    via dataclasses.replace or scenario-file "scaling" blocks.
    """

    loss_compute_exponent: float = 0.15
    detectable_loss_improvement: float = 0.02
    inference_optimal_coefficient: float = 0.1
    general_anchors: tuple = DEFAULT_GENERAL_ANCHORS
    math_coding_anchors: tuple = DEFAULT_MATH_CODING_ANCHORS

    def __post_init__(self) -> None:
        if not (0.0 < self.loss_compute_exponent <= 1.0):
            raise DomainError(
                f"loss_compute_exponent must be in (0, 1]: {self.loss_compute_exponent!r}"
            )
        if not (0.0 < self.detectable_loss_improvement < 1.0):
            raise DomainError(
                "detectable_loss_improvement must be in (0, 1): "
                f"{self.detectable_loss_improvement!r}"
            )
        if not (0.0 < self.inference_optimal_coefficient < math.inf):
            raise DomainError(
                f"inference_optimal_coefficient must be positive: {self.inference_optimal_coefficient!r}"
            )
        object.__setattr__(self, "general_anchors", _as_anchor_table(self.general_anchors))
        object.__setattr__(
            self, "math_coding_anchors", _as_anchor_table(self.math_coding_anchors)
        )
        # Math/coding inference stays at least as valuable as general
        # inference at every probe point.
        probes = sorted(
            {x for x, _ in self.general_anchors}
            | {x for x, _ in self.math_coding_anchors}
            | {self.general_anchors[-1][0] + 1.0, self.math_coding_anchors[-1][0] + 1.0}
        )
        for x in probes:
            if _interp(x, self.math_coding_anchors) < _interp(x, self.general_anchors) - 1e-12:
                raise DomainError(
                    "math_coding_anchors must dominate general_anchors everywhere"
                )

    def anchors_for(self, domain: CapabilityDomain) -> tuple:
        if domain is CapabilityDomain.MATH_CODING:
            return self.math_coding_anchors
        return self.general_anchors


DEFAULT_CONFIG = ScalingConfig()


# -- loss <-> compute ---------------------------------------------------------


def compute_multiplier_for_loss_ratio(ratio: float, cfg: ScalingConfig = DEFAULT_CONFIG) -> float:
    """Compute factor needed to move final loss by the given ratio.

    ratio < 1 means better (lower) loss and needs a multiplier > 1;
    ratio == 1 is free; ratio > 1 (worse loss) costs less than 1x.
    """
    if not (0.0 < ratio < math.inf) or math.isnan(ratio):
        raise DomainError(f"loss ratio must be positive and finite: {ratio!r}")
    return ratio ** (-1.0 / cfg.loss_compute_exponent)


def loss_ratio_for_multiplier(multiplier: float, cfg: ScalingConfig = DEFAULT_CONFIG) -> float:
    """Inverse of compute_multiplier_for_loss_ratio."""
    if not (0.0 < multiplier < math.inf) or math.isnan(multiplier):
        raise DomainError(f"compute multiplier must be positive and finite: {multiplier!r}")
    return multiplier ** (-cfg.loss_compute_exponent)


def min_detectable_finetune_fraction(cfg: ScalingConfig = DEFAULT_CONFIG) -> float:
    """Smallest fine-tune, as a fraction of original training compute, that
    moves loss beyond measurement noise.  ~0.144 at default constants; the
    reporting rules round this up to a 15% bright line."""
    ratio = 1.0 - cfg.detectable_loss_improvement
    return compute_multiplier_for_loss_ratio(ratio, cfg) - 1.0


# -- compute-optimal inference ------------------------------------------------


def compute_optimal_inference(
    training: ComputeAmount, cfg: ScalingConfig = DEFAULT_CONFIG
) -> ComputeAmount:
    """Per-request inference budget a training run of this size is tuned for:
    k * sqrt(C)."""
    if training.is_zero:
        raise DomainError("compute-optimal inference undefined at zero training compute")
    return ComputeAmount(
        math.log10(cfg.inference_optimal_coefficient) + 0.5 * training.log10_flop
    )


def excess_inference_ooms(actual: ComputeAmount, optimal: ComputeAmount) -> OomValue:
    """OOMs of per-request inference above optimal; clamps to 0 below it."""
    if actual.is_zero or optimal.is_zero:
        raise DomainError("excess inference needs positive actual and optimal amounts")
    return OomValue(max(0.0, actual.log10_flop - optimal.log10_flop))


def training_equivalent_ooms(
    excess, domain: CapabilityDomain = CapabilityDomain.GENERAL,
    cfg: ScalingConfig = DEFAULT_CONFIG,
) -> OomValue:
    """Convert excess inference OOMs into training-compute OOMs via the
    domain's anchor table.  Zero maps to zero; beyond the last anchor the
    value plateaus exactly at the last y."""
    x = excess.ooms if isinstance(excess, OomValue) else OomValue(float(excess)).ooms
    return OomValue(_interp(x, cfg.anchors_for(domain)))


def inference_adjusted_compute(
    training: ComputeAmount,
    profile,
    cfg: ScalingConfig = DEFAULT_CONFIG,
) -> ComputeAmount:
    """Training compute credited with training-equivalent OOMs for running
    above-optimal inference.  No profile, or at-or-below-optimal inference,
    returns training unchanged (exactly)."""
    if profile is None:
        return training
    if not isinstance(profile, InferenceProfile):
        raise DomainError(f"expected an InferenceProfile: {profile!r}")
    optimal = compute_optimal_inference(training, cfg)
    excess = excess_inference_ooms(profile.per_request_compute, optimal)
    if excess.ooms == 0.0:
        return training
    bonus = training_equivalent_ooms(excess, profile.capability_domain, cfg)
    return training.shifted_ooms(bonus.ooms)
