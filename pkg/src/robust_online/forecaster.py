"""Exponentially weighted aggregation of binary expert predictions.

The forecaster keeps one positive weight per expert, predicts 1 with
probability equal to the weight fraction voting 1, and multiplies each
weight by exp(-rate * loss) after the reveal.  For 0/1 expert predictions
and 0/1 labels the expected mistake rate equals the weighted average of
the expert losses, so both classic regret regimes apply:

  rate = sqrt(8 ln N / T)            expected regret <= sqrt((T/2) ln N)
  rate = ln(1 + sqrt(2 ln N / L*))   expected loss  <= L* + sqrt(2 L* ln N) + ln N

where L* bounds the best expert's total loss.  Weights are renormalized by
their maximum every update, which changes nothing (predictions depend only
on weight ratios) and keeps them away from underflow.
"""

import math

import numpy as np


def horizon_rate(n_experts: int, horizon: int) -> float:
    if n_experts < 1 or horizon < 1:
        raise ValueError("need at least one expert and one round")
    return math.sqrt(8.0 * math.log(max(n_experts, 2)) / horizon)


def loss_budget_rate(n_experts: int, loss_budget: int) -> float:
    """Tuning for a known bound on the best expert's total loss.

    A budget of 0 is clamped to 1; the small-loss guarantee below is
    stated for budgets >= 1.
    """
    if n_experts < 1:
        raise ValueError("need at least one expert")
    budget = max(int(loss_budget), 1)
    return math.log(1.0 + math.sqrt(2.0 * math.log(max(n_experts, 2)) / budget))


def horizon_regret_bound(n_experts: int, horizon: int) -> float:
    return math.sqrt(horizon / 2.0 * math.log(max(n_experts, 2)))


def small_loss_bound(n_experts: int, loss_budget: int) -> float:
    n = math.log(max(n_experts, 2))
    return loss_budget + math.sqrt(2.0 * loss_budget * n) + n


class ExponentialWeightsForecaster:
    def __init__(self, n_experts: int, rate: float):
        if n_experts < 1:
            raise ValueError("need at least one expert")
        if rate <= 0:
            raise ValueError("the learning rate must be positive")
        self.rate = rate
        self.weights = np.ones(n_experts)

    def probability(self, predictions) -> float:
        """Probability of predicting 1 given the experts' 0/1 votes."""
        preds = np.asarray(predictions, dtype=float)
        return float(self.weights @ preds / self.weights.sum())

    def predict(self, predictions, rng) -> int:
        return int(rng.random() < self.probability(predictions))

    def update(self, losses) -> None:
        self.weights = self.weights * np.exp(
            -self.rate * np.asarray(losses, dtype=float)
        )
        self.weights /= self.weights.max()


def weight_trajectory(prediction_matrix, loss_matrix, rate: float):
    """Per-round probabilities of predicting 1, for vectorized replays.

    prediction_matrix and loss_matrix are (n_experts, horizon) 0/1 arrays;
    the returned vector matches a fresh forecaster fed column by column.
    """
    preds = np.asarray(prediction_matrix, dtype=float)
    losses = np.asarray(loss_matrix, dtype=float)
    n, horizon = preds.shape
    w = np.ones(n)
    probs = np.empty(horizon)
    for t in range(horizon):
        probs[t] = w @ preds[:, t] / w.sum()
        w = w * np.exp(-rate * losses[:, t])
        w /= w.max()
    return probs
