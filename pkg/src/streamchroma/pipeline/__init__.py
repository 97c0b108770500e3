"""Steps 1 to 6 turning a stream summary into a ``(delta-1)``-coloring."""
from .run import FallbackUnsat, IncompleteReport, PipelineResult, run_fallback, run_pipeline
from .serene import KNOWN, Knowledge, SereneColoring, check_serene

__all__ = [
    "run_pipeline", "run_fallback", "PipelineResult", "IncompleteReport", "FallbackUnsat",
    "KNOWN", "Knowledge", "SereneColoring", "check_serene",
]
