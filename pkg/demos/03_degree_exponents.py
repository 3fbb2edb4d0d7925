"""
In-degree tails and how their exponent moves over time
======================================================

Fit a power law to the in-degrees accumulated inside sliding windows,
both as plain counts and with each citation weighted by the inverse of the
citing year's output.
"""

import numpy as np

import citenet as cn

rng = np.random.default_rng(0)

# Sanity check on known data first: continuous draws with exponent 2.5.
draws = (1.0 - rng.random(50_000)) ** (-1 / 1.5)
print("Hill estimate on alpha=2.5 draws:", round(cn.fit_power_law_continuous(draws, k_min=1.0).alpha, 4))
rounded = np.floor(draws).astype(int)
print("discrete fit on the floor of the same draws:", round(cn.fit_power_law_discrete(rounded, k_min=1).alpha, 4))

corpus = cn.generate(cn.SynthConfig(years=30, base_papers=250, growth_rate=1.1, seed=3))

# One window: the histogram and its fitted tail.
sample = cn.indegree_sample(corpus, 1990, 2000)
hist = cn.degree_histogram(sample)
fit = cn.fit_power_law_discrete(sample, k_min=5)
print(f"window 1990-2000: {sample.n_papers} papers, max in-degree {hist.k.max()}, "
      f"alpha {fit.alpha:.3f} over {fit.n_tail} papers with k >= {fit.k_min}")

# Sliding windows of 11 years, raw and normalized, plus a linear trend.
centers = list(range(1980, 2000))
for mode in ("raw", "normalized"):
    series = cn.exponent_sweep(corpus, centers, half_width=5, mode=mode)
    trend = cn.fit_linear(series.as_year_series())
    first, last = series.alphas[0], series.alphas[-1]
    print(f"{mode:>10}: alpha {first:.3f} -> {last:.3f}, trend {trend.slope:+.5f} per year")
