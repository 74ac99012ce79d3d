"""Moebius and Mertens tables with independent cross-checks and sequence analysis.

The package builds mu(1..N) and M(1..N) three ways (linear sieve, divisor-sum
recursion, streaming accumulator), confirms them against three structurally
unrelated identities (Redheffer determinants, Farey exponential sums,
hyperbolic lattice counts), and reproduces a statistical study of the Mertens
sequence: zeros, extrema, squarefree densities, probabilistic envelopes,
Welch power spectra, and empirical mode decomposition.
"""

from .analysis import (
    BoundCheckReport,
    ExtremumRecord,
    GlobalExtrema,
    RatioSeries,
    ZeroList,
    bound_check,
    central_quantile,
    count_mobius_zeros,
    find_zeros,
    global_extrema,
    normal_quantile,
    ratio_series,
    segment_extrema,
)
from .crosscheck import (
    FareySequence,
    RedhefferMatrix,
    farey_sequence,
    mertens_farey,
    mertens_hyperbolic,
    mertens_redheffer,
    redheffer_matrix,
    totient_summatory,
)
from .emd import (
    EnvelopeUndefined,
    ImfSet,
    SiftConfig,
    emd_decompose,
    find_extrema,
    imf_defect,
    spline_envelope,
    zero_crossings,
)
from .errors import IntegrityError, NumericalError
from .spectral import (
    EnvelopeSeries,
    SlopeFit,
    Spectrum,
    envelope_series,
    fft_radix2,
    fit_loglog_slope,
    periodogram_welch,
)
from .storage import read_checkpoint, read_table, write_checkpoint, write_table
from .tables import (
    MertensAccumulator,
    MertensTable,
    MobiusTable,
    ParityCounts,
    mertens_direct,
    mertens_from_mobius,
    mobius_recursive,
    mobius_sieve,
    parity_counts,
)

__version__ = "0.1.0"

__all__ = [
    "BoundCheckReport",
    "EnvelopeSeries",
    "EnvelopeUndefined",
    "ExtremumRecord",
    "FareySequence",
    "GlobalExtrema",
    "ImfSet",
    "IntegrityError",
    "MertensAccumulator",
    "MertensTable",
    "MobiusTable",
    "NumericalError",
    "ParityCounts",
    "RatioSeries",
    "RedhefferMatrix",
    "SiftConfig",
    "SlopeFit",
    "Spectrum",
    "ZeroList",
    "bound_check",
    "central_quantile",
    "count_mobius_zeros",
    "emd_decompose",
    "envelope_series",
    "farey_sequence",
    "fft_radix2",
    "find_extrema",
    "find_zeros",
    "fit_loglog_slope",
    "global_extrema",
    "imf_defect",
    "mertens_direct",
    "mertens_farey",
    "mertens_from_mobius",
    "mertens_hyperbolic",
    "mertens_redheffer",
    "mobius_recursive",
    "mobius_sieve",
    "normal_quantile",
    "parity_counts",
    "periodogram_welch",
    "ratio_series",
    "read_checkpoint",
    "read_table",
    "redheffer_matrix",
    "segment_extrema",
    "spline_envelope",
    "totient_summatory",
    "write_checkpoint",
    "write_table",
    "zero_crossings",
]
