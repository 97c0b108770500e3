"""Exception hierarchy.

Input errors derive from :class:`StreamError`; probabilistic failures of the
coloring pipeline derive from :class:`PipelineFailure` and carry the step,
the clique (if any) and a witness so they can be turned into an incomplete
report instead of an unverified coloring.
"""


class StreamChromaError(Exception):
    pass


class StreamError(StreamChromaError, ValueError):
    pass


class MalformedHeader(StreamError):
    pass


class SelfLoop(StreamError):
    pass


class VertexOutOfRange(StreamError):
    pass


class DuplicateEdge(StreamError):
    pass


class BudgetExceeded(StreamChromaError):
    pass


class InfeasibleSpec(StreamChromaError, ValueError):
    pass


class FieldOverflow(StreamChromaError, OverflowError):
    pass


class DegenerateRates(StreamChromaError, ValueError):
    pass


class ParameterViolation(StreamChromaError, ValueError):
    pass


class Undecodable(StreamChromaError):
    pass


class ShapeMismatch(StreamChromaError, ValueError):
    pass


class CoreUndetermined(StreamChromaError):
    pass


class PipelineFailure(StreamChromaError):
    """A whp-event of the pipeline did not happen on this run."""

    kind = "failure"

    def __init__(self, message, step=None, clique=None, witness=None):
        super().__init__(message)
        self.step = step
        self.clique = clique
        self.witness = witness

    def as_dict(self):
        return {
            "kind": self.kind,
            "step": self.step,
            "clique": self.clique,
            "witness": self.witness,
            "message": str(self),
        }


class RecoveryIncomplete(PipelineFailure):
    kind = "RecoveryIncomplete"


class NoCandidatePair(PipelineFailure):
    kind = "NoCandidatePair"


class ListExhausted(PipelineFailure):
    kind = "ListExhausted"


class SlackWitnessMissing(PipelineFailure):
    kind = "SlackWitnessMissing"


class MatchingFailed(PipelineFailure):
    kind = "MatchingFailed"


class IndependenceSearchFailed(PipelineFailure):
    kind = "IndependenceSearchFailed"


class SereneViolation(PipelineFailure):
    kind = "SereneViolation"
