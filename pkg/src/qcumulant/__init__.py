"""Genuine multi-party correlation measures from the cumulant of a quantum state.

The measure of an N-party state is half the trace norm of its cumulant, the
part of the density matrix not reconstructible from marginals on proper
subsets of parties. Two backends are provided: dense density matrices for
general states and an exact combinatorial one for stabilizer states.
"""

from .cumulant import (
    CorrelationReport,
    correlation_measure,
    correlation_report,
    cumulant,
    cumulant_of_subset,
    lui_mcf,
    mutual_entropy_3,
    pseudo_state,
    relative_entropy_total,
    total_correlation,
    ursell_reconstruct,
)
from .dense_state import (
    DensityMatrix,
    LocalChannel,
    PureState,
    SystemShape,
    partial_trace,
    tensor_product,
    trace_distance,
    trace_norm,
)
from .errors import DomainError, ParseError, QCumulantError, ResourceError
from .stabilizer import (
    PauliOperator,
    StabilizerGroup,
    parse_pauli,
    stabilizer_measure,
    validate_stabilizer,
)

__version__ = "0.1.0"
