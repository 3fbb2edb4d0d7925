"""
Publication growth and reference aging
======================================

Build a synthetic corpus, measure how fast it grows, and look at how old
the papers it cites tend to be.
"""

import citenet as cn

# A corpus of 25 yearly cohorts growing 8% a year, with references that
# mostly go to papers two years old.
config = cn.SynthConfig(years=25, base_papers=150, growth_rate=1.08, refs_mean=10, seed=1)
corpus = cn.generate(config)
print(corpus)

# Yearly output and the number of distinct venues publishing it.
pubs = cn.publication_counts(corpus)
journals = cn.journal_counts(corpus)
for year in pubs.years[::5]:
    print(f"{year}: {pubs[year]:5d} papers in {journals[year]:3d} venues")

# Output grows exponentially while the venue count saturates at the fixed
# pool of 100, so later growth comes from bigger venues.
exp_fit = cn.fit_exponential(pubs)
lin_fit = cn.fit_linear(journals)
print(f"growth rate {exp_fit.growth_rate:.4f} per year (r2 on log scale {exp_fit.r_squared_log:.4f})")
print(f"venue trend {lin_fit.slope:+.3f} per year")

# Reference distributions: for each citing year, the share of references
# going to each cited year. The peak sits two years back.
matrix = cn.citation_counts_matrix(corpus)
for year in (1985, 1990, 1995):
    ref = cn.reference_distribution(matrix, year)
    peak = cn.peak_stats(ref, year)
    recent = ref.as_dict()
    print(f"refs of {year}: peak at {peak.peak_year} ({peak.peak_delta:+d}), "
          f"share of last 5 years {sum(recent.get(year - a, 0.0) for a in range(5)):.2f}")

# Aligned to the peak the curves coincide.
aligned = [cn.align_to_peak(cn.reference_distribution(matrix, y)) for y in (1990, 1995)]
print(f"max gap between aligned 1990 and 1995 curves: {cn.max_pointwise_gap(*aligned):.4f}")
near = {k: round(v, 3) for k, v in aligned[1].as_dict().items() if -3 <= k <= 3}
print("aligned 1995 curve near the peak:", near)
