"""methodgraph: inheritance graphs of machine-learning methods.

The package turns hand-annotated method tables into a directed
"based on" graph and puts three faces on it: a Python API, a command
line (``methodgraph --help``), and an HTTP service consumed by the
bundled web client.
"""

from .graphcore import (
    Edge,
    MethodGraph,
    Recommendation,
    SubgraphView,
    UnknownAcronymError,
    UnknownAreaError,
    ancestors,
    area_subgraph,
    build_graph,
    descendants,
    has_cross_area_user,
    induced_subgraph,
    recommend,
    search,
    strongly_connected_components,
    upgrade_candidates,
    validate_dag,
)
from .ingest import (
    CSV_HEADER,
    StrictParseError,
    TableDocument,
    TableFormatError,
    export_records_json,
    export_table,
    parse_based_on,
    parse_records_json,
    parse_table,
)
from .layout import (
    LayoutError,
    LayoutParams,
    LayoutState,
    LayoutStats,
    init_layout,
    run,
    step,
)
from .schema import (
    BaseRef,
    EdgeKind,
    IssueCode,
    MalformedFieldError,
    MethodRecord,
    PartialDate,
    Severity,
    ValidationIssue,
    ValidationReport,
    normalize_acronym,
    validate_record,
)
from .store import Collection, Datastore, DatastoreError, Submission, load_dataset
from .wire import export_layout

__version__ = "0.1.0"
