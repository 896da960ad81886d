"""Independent reference implementations used to pin expected values.

Everything here is written as a straight-line dense-vector transcription of
the update rules, with no sparsity tricks, so the production code can be
checked against it rather than against itself.
"""
import math

import numpy as np


class DenseReferenceLearner:
    """Continuous actor-critic with eligibility traces over dense feature vectors.

    One update per transition, applied literally in order: TD error from the
    pre-update critic, replacing trace + critic step, accumulating mean trace
    + mean step, accumulating deviation trace + deviation step.
    """

    def __init__(self, n, alpha_v, alpha_mu, alpha_sigma, gamma, lambda_w,
                 lambda_v, sigma_min=0.01):
        self.n = n
        self.alpha_v = alpha_v
        self.alpha_mu = alpha_mu
        self.alpha_sigma = alpha_sigma
        self.gamma = gamma
        self.lambda_w = lambda_w
        self.lambda_v = lambda_v
        self.sigma_min = sigma_min
        self.w_mu = np.zeros(n)
        self.w_sigma = np.zeros(n)
        self.v = np.zeros(n)
        self.e_mu = np.zeros(n)
        self.e_sigma = np.zeros(n)
        self.e_v = np.zeros(n)

    def policy(self, x):
        mu = float(np.dot(self.w_mu, x))
        sigma = max(self.sigma_min, math.exp(float(np.dot(self.w_sigma, x))))
        return mu, sigma

    def update(self, x, a, mu, sigma, r, x_next):
        delta = r + self.gamma * float(np.dot(self.v, x_next)) - float(np.dot(self.v, x))
        self.e_v = np.minimum(1.0, self.lambda_v * self.gamma * self.e_v + x)
        self.v = self.v + self.alpha_v * delta * self.e_v
        self.e_mu = self.lambda_w * self.e_mu + (a - mu) * x
        self.w_mu = self.w_mu + self.alpha_mu * delta * self.e_mu
        self.e_sigma = self.lambda_w * self.e_sigma + ((a - mu) ** 2 - sigma ** 2) * x
        self.w_sigma = self.w_sigma + self.alpha_sigma * delta * self.e_sigma
        return delta


def dense_vector(indices, n):
    """Binary feature vector with ones at the given indices."""
    x = np.zeros(n)
    x[list(indices)] = 1.0
    return x


def brute_force_tile_count(num_tilings, resolutions, dims, baseline):
    """Feature count by explicit enumeration of every tile in every tiling."""
    total = 0
    for res in resolutions:
        for _ in range(num_tilings):
            count = 1
            for _ in range(dims):
                count *= res
            total += count
    return total + (1 if baseline else 0)
