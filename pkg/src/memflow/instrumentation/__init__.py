from memflow.instrumentation.crossings import (
    CrossingDetector,
    CrossingEvent,
    detect_crossings,
    events_by_variable,
    instanton_step_count,
    net_signed_crossings,
    side,
)
from memflow.instrumentation.critical import (
    CriticalPointReport,
    InstantonTrace,
    SlowPointTracker,
    face_jacobian,
    index_of,
    index_sequence,
    is_monotone,
    refine_critical_point,
)
from memflow.instrumentation.eventlog import crossings_from_records, read_events, write_events
from memflow.instrumentation.lyapunov import DegeneratePerturbation, LyapunovEstimate, lyapunov_max

__all__ = [
    "CriticalPointReport",
    "CrossingDetector",
    "CrossingEvent",
    "DegeneratePerturbation",
    "InstantonTrace",
    "LyapunovEstimate",
    "SlowPointTracker",
    "crossings_from_records",
    "detect_crossings",
    "events_by_variable",
    "face_jacobian",
    "index_of",
    "index_sequence",
    "instanton_step_count",
    "is_monotone",
    "lyapunov_max",
    "net_signed_crossings",
    "read_events",
    "refine_critical_point",
    "side",
    "write_events",
]
