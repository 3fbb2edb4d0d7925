"""Seeded generator of growing synthetic citation corpora.

Papers are created cohort by cohort, ``round(N0 * g**t)`` of them in year
``t``. Every paper draws a Poisson number of references. Each reference
first picks how many years back to cite from an age kernel that depends on
age alone (never on cohort sizes), then a target paper inside that cohort,
uniformly or in proportion to in-degree + 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Union

import numpy as np

from citenet.corpus import Corpus

REFS_DISTRIBUTION = "poisson"
MAX_REDRAW_ROUNDS = 200


class Attachment(str, Enum):
    UNIFORM = "uniform"
    PREFERENTIAL = "preferential"


@dataclass(frozen=True)
class FixedVenues:
    """A constant pool of ``count`` venues; papers pick one uniformly."""

    count: int = 100

    def venues_in_year(self, t: int) -> int:
        return self.count


@dataclass(frozen=True)
class GrowingVenues:
    """``initial + floor(per_year * t)`` venues open in year ``t``."""

    initial: int = 50
    per_year: float = 10.0

    def venues_in_year(self, t: int) -> int:
        return self.initial + int(math.floor(self.per_year * t))


JournalRegime = Union[FixedVenues, GrowingVenues]


@dataclass(frozen=True)
class AgeKernel:
    """Cohort-level citation age preference.

    A reference goes back ``a >= 0`` years with probability proportional to
    ``exp(-decay * |a - mode_age|)`` over the ages that exist, sharing
    ``1 - pre_publication``; age -1 (next year's cohort) gets
    ``pre_publication`` whenever that cohort exists.
    """

    mode_age: int = 2
    decay: float = 0.5
    pre_publication: float = 0.01

    def probabilities(self, t: int, has_next: bool) -> tuple[np.ndarray, np.ndarray]:
        """``(ages, probabilities)`` available to a paper published in year ``t``."""
        ages = np.arange(0, t + 1)
        w = np.exp(-self.decay * np.abs(ages - self.mode_age))
        w /= w.sum()
        if has_next and self.pre_publication > 0:
            ages = np.concatenate(([-1], ages))
            w = np.concatenate(([self.pre_publication], w * (1.0 - self.pre_publication)))
        return ages, w


@dataclass(frozen=True)
class SynthConfig:
    years: int = 30
    base_papers: int = 200
    growth_rate: float = 1.0
    refs_mean: float = 10.0
    age_kernel: AgeKernel = field(default_factory=AgeKernel)
    attachment: Attachment = Attachment.PREFERENTIAL
    journal_regime: JournalRegime = field(default_factory=FixedVenues)
    seed: int = 0
    start_year: int = 1975

    def __post_init__(self):
        object.__setattr__(self, "attachment", Attachment(self.attachment))
        problems = []
        if self.years < 1:
            problems.append("years must be >= 1")
        if self.base_papers < 1:
            problems.append("base_papers must be >= 1")
        if not self.growth_rate >= 1.0:
            problems.append("growth_rate must be >= 1")
        if not self.refs_mean >= 0.0:
            problems.append("refs_mean must be >= 0")
        k = self.age_kernel
        if k.mode_age < 0:
            problems.append("age_kernel.mode_age must be >= 0")
        if not k.decay > 0:
            problems.append("age_kernel.decay must be > 0")
        if not 0.0 <= k.pre_publication <= 0.05:
            problems.append("age_kernel.pre_publication must lie in [0, 0.05]")
        regime = self.journal_regime
        if isinstance(regime, FixedVenues):
            if regime.count < 1:
                problems.append("fixed venue count must be >= 1")
        elif isinstance(regime, GrowingVenues):
            if regime.initial < 1 or regime.per_year < 0:
                problems.append("growing venues need initial >= 1 and per_year >= 0")
        else:
            problems.append(f"unknown journal regime {regime!r}")
        if self.seed < 0:
            problems.append("seed must be non-negative")
        if problems:
            raise ValueError("invalid SynthConfig: " + "; ".join(problems))

    def papers_per_year(self) -> list[int]:
        return [int(round(self.base_papers * self.growth_rate**t)) for t in range(self.years)]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["attachment"] = self.attachment.value
        regime = self.journal_regime
        d["journal_regime"] = {"kind": "fixed_count" if isinstance(regime, FixedVenues) else "growing_count", **asdict(regime)}
        d["refs_distribution"] = REFS_DISTRIBUTION
        return d

    @classmethod
    def from_dict(cls, data: dict) -> SynthConfig:
        data = dict(data)
        data.pop("refs_distribution", None)
        # written alongside the config by the CLI; not an input
        data.pop("stats", None)
        if "age_kernel" in data and isinstance(data["age_kernel"], dict):
            data["age_kernel"] = AgeKernel(**data["age_kernel"])
        regime = data.get("journal_regime")
        if isinstance(regime, dict):
            regime = dict(regime)
            kind = regime.pop("kind", "fixed_count")
            if kind == "fixed_count":
                data["journal_regime"] = FixedVenues(**regime)
            elif kind == "growing_count":
                data["journal_regime"] = GrowingVenues(**regime)
            else:
                raise ValueError(f"unknown journal regime kind {kind!r}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


@dataclass(frozen=True)
class SynthStats:
    """Bookkeeping for one generation run."""

    papers_per_year: tuple[int, ...]
    requested_refs: int
    dropped_refs: int

    @property
    def edges(self) -> int:
        return self.requested_refs - self.dropped_refs


def _duplicates(keys: np.ndarray) -> np.ndarray:
    """Mask of entries whose key already appeared earlier in the array."""
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    dup = np.zeros(len(keys), dtype=bool)
    dup[order[1:]] = sorted_keys[1:] == sorted_keys[:-1]
    return dup


def generate(config: SynthConfig) -> Corpus:
    """Build a synthetic corpus; identical configs give identical corpora."""
    return generate_with_stats(config)[0]


def generate_with_stats(config: SynthConfig) -> tuple[Corpus, SynthStats]:
    rng = np.random.default_rng(config.seed)
    T = config.years
    sizes = np.array(config.papers_per_year(), dtype=np.int64)
    if np.any(sizes < 1):
        raise ValueError("every year needs at least one paper")
    start = np.concatenate(([0], np.cumsum(sizes)))
    n_total = int(start[-1])
    year_of = np.repeat(np.arange(T), sizes)

    venue_codes = np.empty(n_total, dtype=np.int64)
    max_venues = 1
    for t in range(T):
        j = config.journal_regime.venues_in_year(t)
        max_venues = max(max_venues, j)
        venue_codes[start[t] : start[t + 1]] = rng.integers(0, j, size=sizes[t])

    preferential = config.attachment is Attachment.PREFERENTIAL
    indegree = np.zeros(n_total, dtype=np.int64)
    citing_parts, cited_parts = [], []
    requested = dropped = 0

    for t in range(T):
        lo, hi = int(start[t]), int(start[t + 1])
        n_refs = rng.poisson(config.refs_mean, size=hi - lo)
        citer = np.repeat(np.arange(lo, hi), n_refs)
        requested += citer.size
        if citer.size == 0:
            continue
        ages, probs = config.age_kernel.probabilities(t, has_next=t + 1 < T)
        cited_year = t - ages[rng.choice(len(ages), size=citer.size, p=probs)]

        # a paper cannot cite more distinct papers of a cohort than it holds
        group = citer * (T + 1) + cited_year
        order = np.argsort(group, kind="stable")
        g_sorted = group[order]
        first = np.flatnonzero(np.concatenate(([True], g_sorted[1:] != g_sorted[:-1])))
        rank_sorted = np.arange(g_sorted.size) - np.repeat(first, np.diff(np.append(first, g_sorted.size)))
        rank = np.empty_like(rank_sorted)
        rank[order] = rank_sorted
        capacity = sizes[cited_year] - (cited_year == t)
        keep = rank < capacity
        dropped += int(np.count_nonzero(~keep))
        citer, cited_year = citer[keep], cited_year[keep]

        if preferential:
            cum = np.cumsum(indegree + 1)
            base = np.concatenate(([0], cum))

            def draw(cy):
                r = rng.integers(base[start[cy]], base[start[cy + 1]])
                return np.searchsorted(cum, r, side="right")

        else:

            def draw(cy):
                return start[cy] + rng.integers(0, sizes[cy])

        target = draw(cited_year)
        bad = (target == citer) | _duplicates(citer * n_total + target)
        for _ in range(MAX_REDRAW_ROUNDS):
            if not bad.any():
                break
            idx = np.flatnonzero(bad)
            target[idx] = draw(cited_year[idx])
            bad = (target == citer) | _duplicates(citer * n_total + target)
        if bad.any():
            dropped += int(np.count_nonzero(bad))
            citer, target = citer[~bad], target[~bad]

        citing_parts.append(citer)
        cited_parts.append(target)
        if preferential:
            indegree += np.bincount(target, minlength=n_total)

    width = max(6, len(str(max(n_total - 1, 0))))
    ids = np.array([f"P{i:0{width}d}" for i in range(n_total)])
    vwidth = max(4, len(str(max_venues - 1)))
    venues = np.array([f"V{j:0{vwidth}d}" for j in range(max_venues)])
    corpus = Corpus(
        ids=ids,
        years=year_of + config.start_year,
        venue_codes=venue_codes,
        venues=venues,
        doc_codes=np.zeros(n_total, dtype=np.int8),
        citing=np.concatenate(citing_parts) if citing_parts else np.zeros(0, dtype=np.int64),
        cited=np.concatenate(cited_parts) if cited_parts else np.zeros(0, dtype=np.int64),
    )
    return corpus, SynthStats(tuple(sizes.tolist()), requested, dropped)
