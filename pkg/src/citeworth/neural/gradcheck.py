"""Finite-difference verification of the analytic gradients.

The check perturbs a seeded random subsample of coordinates in every
parameter group and compares central differences of the loss against the
backward pass.  Regularization is turned off here: its gradient (2*l2*w)
is exact by construction and its tiny quadratic contribution would
otherwise drown real signal in float64 round-off for weakly-used
parameters.
"""

from dataclasses import dataclass

import numpy as np

from .model import NeuralModel


def relative_error(a: float, n: float) -> float:
    """Symmetric relative difference |a - n| / max(|a|, |n|, 1e-12)."""
    return abs(a - n) / max(abs(a), abs(n), 1e-12)


def numeric_grad(
    model: NeuralModel,
    bundles,
    labels,
    name: str,
    flat_index: int,
    epsilon: float = 1e-5,
    contextual: bool | None = None,
) -> float:
    """Central finite difference of the (unregularized) loss w.r.t. one
    parameter coordinate."""
    theta = self_param = model.params[name]
    original = theta.flat[flat_index]
    theta.flat[flat_index] = original + epsilon
    plus = model.loss(bundles, labels, contextual, lam=0.0)
    theta.flat[flat_index] = original - epsilon
    minus = model.loss(bundles, labels, contextual, lam=0.0)
    self_param.flat[flat_index] = original
    return (plus - minus) / (2.0 * epsilon)


@dataclass
class GradCheckReport:
    per_group: dict[str, float]
    max_rel_error: float

    def worst_group(self) -> str:
        return max(self.per_group, key=self.per_group.get)


def grad_check(
    model: NeuralModel,
    bundles,
    labels,
    epsilon: float = 1e-5,
    max_coords: int = 200,
    seed: int = 0,
    contextual: bool | None = None,
) -> GradCheckReport:
    """Max relative error between analytic and numeric gradients, per
    parameter group and overall.  Samples up to ``max_coords`` coordinates
    per group (every coordinate for small groups)."""
    _, analytic = model.loss_and_grads(bundles, labels, contextual, lam=0.0)
    rng = np.random.default_rng(seed)
    per_group: dict[str, float] = {}
    for name in sorted(model.params):
        size = model.params[name].size
        if size <= max_coords:
            coords = np.arange(size)
        else:
            coords = rng.choice(size, size=max_coords, replace=False)
        worst = 0.0
        for idx in coords:
            n = numeric_grad(model, bundles, labels, name, int(idx), epsilon, contextual)
            a = float(analytic[name].flat[int(idx)])
            worst = max(worst, relative_error(a, n))
        per_group[name] = worst
    return GradCheckReport(per_group, max(per_group.values()))
