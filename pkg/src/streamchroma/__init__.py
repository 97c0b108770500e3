"""One-pass semi-streaming ``(delta-1)``-coloring with sparse-recovery
sketches, a lower-bound gadget, and oracles to check both."""
from .config import RunConfig
from .errors import PipelineFailure, StreamChromaError
from .estimator import IncompleteColoring, StreamingColorer
from .graph import EdgeStream, Graph, load_graph, read_edge_stream, verify_coloring, write_edge_stream
from .pipeline import FallbackUnsat, IncompleteReport, PipelineResult, run_pipeline
from .stream import StreamEngine, StreamSummary, run_pass

__version__ = "0.1.0"


def color_stream(stream, cfg=None, oracle_graph=None):
    """Run the pass over ``stream`` and color the summary."""
    return run_pipeline(run_pass(stream, cfg, oracle_graph))


__all__ = [
    "RunConfig", "StreamChromaError", "PipelineFailure", "StreamingColorer", "IncompleteColoring",
    "EdgeStream", "Graph", "load_graph", "read_edge_stream", "write_edge_stream", "verify_coloring",
    "FallbackUnsat", "IncompleteReport", "PipelineResult", "run_pipeline", "StreamEngine", "StreamSummary",
    "run_pass", "color_stream", "__version__",
]
