"""Exception types shared across the package."""


class RoomrotError(Exception):
    """Base class for all domain errors."""


class MalformedFile(RoomrotError):
    """Input file does not conform to the documented format."""


class InvalidPreferenceList(RoomrotError):
    """A preference list is not a permutation of the other people."""


class InvalidMatching(RoomrotError):
    """A matching is not a fixed-point-free involution on all people."""


class RotationNotExposed(RoomrotError):
    """Caller tried to eliminate a rotation that is not exposed in the table."""


class InstanceTooLarge(RoomrotError):
    """Brute-force guard tripped."""


class ExplorationBudgetExceeded(RoomrotError):
    """Table-space DFS visited more tables than the configured budget."""


class InternalInconsistency(RoomrotError):
    """A structural invariant failed; indicates a bug, not bad input."""


class TieDetected(RoomrotError):
    """Geometric instance violates strictness for some (person, y, z)."""

    def __init__(self, person, first, second):
        self.person = person
        self.first = first
        self.second = second
        super().__init__(
            f"person {person} is indifferent between {first} and {second}"
        )


class UndecidedComparison(RoomrotError):
    """Certified interval refinement hit the precision floor."""


class PerturbationBoundViolated(RoomrotError):
    """No positive perturbation magnitude keeps strict comparisons ordered."""


class EmptyConstruction(RoomrotError):
    """A reduction was asked to build an instance with no people."""


class MalformedCover(RoomrotError):
    """Bipartite double cover violates (K1) or (K2)."""


class VerificationFailed(RoomrotError):
    """An end-to-end reduction check found a violated clause."""


class DispatchExhausted(RoomrotError):
    """The 1-attribute case analysis did not cover the given type string."""
