"""Citation-network analytics: publication growth, cohort citation
distributions, and windowed power-law in-degree exponents."""

from citenet.corpus import (
    CitationEdge,
    Corpus,
    CorpusError,
    DocType,
    FilterConfig,
    MalformedRecordError,
    PaperRecord,
    ValidationReport,
    load_corpus,
    read_citations,
    read_papers,
    validate,
    write_corpus,
)
from citenet.counts import (
    ExpFit,
    LineFit,
    YearSeries,
    fit_exponential,
    fit_linear,
    journal_counts,
    publication_counts,
)
from citenet.distributions import (
    CitationMatrix,
    CohortDistribution,
    DistributionKind,
    PeakStats,
    align_to_peak,
    citation_counts_matrix,
    citation_distribution,
    max_pointwise_gap,
    normalized_citation_distribution,
    peak_stats,
    reference_distribution,
)
from citenet.powerlaw import (
    DegreeHistogram,
    DegreeMode,
    DegreeSample,
    ExponentSeries,
    PowerLawFit,
    degree_histogram,
    exponent_sweep,
    fit_power_law_continuous,
    fit_power_law_discrete,
    hurwitz_zeta,
    indegree_sample,
)
from citenet.synth import (
    AgeKernel,
    Attachment,
    FixedVenues,
    GrowingVenues,
    SynthConfig,
    generate,
    generate_with_stats,
)

__version__ = "0.1.0"
