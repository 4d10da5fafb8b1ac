"""Reset words for synchronizing automata with certified length bounds."""

from .classes import (
    ClusterStructure,
    QuasiEulerianWitness,
    detect_quasi_eulerian,
    letter_clusters,
    quasi_eulerian_reset,
    quasi_one_cluster_reset,
)
from .codes import (
    Decoder,
    PrefixCode,
    as_decoder,
    decoder_from_code,
    decoder_reset,
    gen_cerny,
    gen_eulerian,
    gen_random_decoder,
    gen_random_dfa,
    gen_xnk,
    small_rank_word,
)
from .core import (
    Automaton,
    apply_word,
    from_text,
    is_reset_word,
    is_strongly_connected,
    is_synchronizing,
    preimage,
    rank_of_word,
    sink_component,
    to_text,
)
from .errors import (
    BudgetExceeded,
    CapExceeded,
    CertificateError,
    ClassMismatchError,
    CriterionViolated,
    NotPrimitiveError,
    NotSynchronizingError,
    PreconditionError,
    ResetWordError,
    SearchExhausted,
    ValidationError,
)
from .induced import WordSet, build_induced, criterion_synchronizing, is_complete
from .linalg import ds_count, markov_matrix, stationary_distribution, word_matrix
from .oracle import exact_pair_threshold, exact_reset_threshold
from .synthesis import (
    ResetCertificate,
    combine_complete_primitive,
    extension_reset,
    greedy_compression,
    greedy_extension,
    reduce_alpha,
    reduce_factor_closed,
    reduce_general,
    reduce_primitive,
    small_rank_pipeline,
)

__version__ = "0.1.0"
