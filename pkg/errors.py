"""
Error types shared by the packing toolkit

Every error derives from PackingToolkitError and from the builtin exception
a plain Python caller would expect for the same mistake.
"""


class PackingToolkitError(Exception):
    """Base class for all toolkit errors"""


# Graph model and parsing

class UnknownEdgeId(PackingToolkitError, KeyError):
    """Edge id is not present in the graph or structure"""

    def __str__(self):
        return Exception.__str__(self)


class DuplicateEdgeId(PackingToolkitError, ValueError):
    """Edge id is already in use (ids are never reused)"""


class VertexOutOfRange(PackingToolkitError, ValueError):
    """Vertex index outside 0..n-1"""


class ParseError(PackingToolkitError, ValueError):
    """Malformed line in a graph file or update stream"""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InconsistentHeader(ParseError):
    """Declared edge count does not match the number of edge lines"""


class EmptyGraph(PackingToolkitError, ValueError):
    """Operation needs at least one edge"""


# Dynamic trees

class WouldCreateCycle(PackingToolkitError, ValueError):
    """link() called on two nodes of the same tree"""


class UnknownEdge(PackingToolkitError, KeyError):
    """Edge handle is not currently linked"""

    def __str__(self):
        return Exception.__str__(self)


class NotConnected(PackingToolkitError, ValueError):
    """Nodes lie in different trees"""


class SameNode(PackingToolkitError, ValueError):
    """Path query between a node and itself"""


# Pseudoforests

class NotInPseudoforest(PackingToolkitError, ValueError):
    """Edge is a candidate, not a member of the pseudoforest"""


class AcyclicComponent(PackingToolkitError, ValueError):
    """Strict orientation query on a component without a cycle"""


class InternalConsistencyError(PackingToolkitError, RuntimeError):
    """A structural invariant was found broken"""


# Packings and estimators

class EmptyActiveSet(PackingToolkitError, ValueError):
    """Pruning left no active element"""


class DensityAboveRhoMax(PackingToolkitError, UserWarning):
    """Coarse density estimate exceeds the configured upper bound"""


class UncoveredEdge(PackingToolkitError, ValueError):
    """Edge belongs to no layer of the packing"""


# Exact oracles and lab

class TooLarge(PackingToolkitError, ValueError):
    """Instance exceeds the enumeration cap"""


class Disconnected(PackingToolkitError, ValueError):
    """Graph must be connected for this query"""


class NoValidTiling(PackingToolkitError, ValueError):
    """Ladder load profile does not split into tiles"""
