"""Decreasing-diagrams confluence toolkit for finite labeled abstract rewrite systems."""

from .errors import DecdiagError, ParseError
from .multiset_order import (
    Label,
    LabelMultiset,
    OracleBudgetError,
    Precedence,
    PrecedenceError,
    cap_s,
    diff_s,
    downset,
    mul_leq,
    mul_less,
    mult1_less,
    mult_less,
)
from .measures import (
    DecompositionError,
    LdPrimeDecomposition,
    PasteError,
    decreasing,
    decreasing_alt,
    hypothesis_decrease_holds,
    ld_check,
    ld_decompose,
    ld_decompose_seqlabels,
    ld_prime_check,
    lexmax,
    paste,
)
from .lars import (
    Conversion,
    Diagram,
    LabeledARS,
    Obj,
    Peak,
    RewriteSeq,
    SeqError,
    UnlabeledARS,
    conv_concat,
    conv_labels,
    conv_lst,
    conv_mirror,
    conv_split,
    dd_check,
    is_conv,
    is_diagram,
    is_seq,
    labels,
    local_peaks,
    lst,
    peak_less,
    peak_measure,
    seq_concat,
    seq_split,
    seq_split_by_labels,
    seq_to_conv,
    step_seq,
    unlabel,
)
from .completion import (
    CompletionError,
    CompletionTrace,
    ConvCorner,
    ConvTriple,
    FuelExhausted,
    Key2Closure,
    LocalCompletionMap,
    LocalConvMap,
    MeasureNotDecreasing,
    MissingJoinError,
    complete_peak,
    complete_peak_conv,
    corner_from_valley,
    key1_close,
    key2_close,
    mirror_peak_complete,
)
from .analysis import (
    CapExceededError,
    Certificate,
    LdReport,
    NonTerminatingError,
    NotLocallyConfluentError,
    certificate_problems,
    certify,
    check_locally_decreasing,
    confluent_oracle,
    conv_map_from_report,
    find_precedence,
    joinable_oracle,
    newman_labeling,
    valley_map_from_report,
    verify_certificate,
)

__version__ = "0.1.0"
