"""
Exception hierarchy for circsep

Geometric impossibility (no separating circle, empty feasible region) is
reported through tagged results. Exceptions are reserved for contract
violations and failed constructions.
"""


class GeometryError(Exception):
    """Base class for all circsep errors"""


class InvalidPolygon(GeometryError, ValueError):
    """Polygon or convex polygon failed construction-time validation"""


class CollinearInput(GeometryError, ValueError):
    """Three points expected to span a circle are collinear"""


class DegenerateInput(GeometryError, ValueError):
    """Input has no area (collinear chain, zero-length line normal, ...)"""


class OutsidePolygon(GeometryError, ValueError):
    """Query point lies outside the closed polygon"""


class PointNotInHalfplane(GeometryError, ValueError):
    """Mixed point/line query whose point is not in the closed halfplane"""


class WitnessConstructionFailed(GeometryError):
    """No perturbation produced a verifiable non-separability witness"""


class Inconclusive(GeometryError):
    """Brute-force reference could not reach a verdict"""


class PolygonFileError(GeometryError):
    """Polygon file could not be parsed"""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class PersistenceError(GeometryError):
    """Preprocessed-structure file is corrupt or of another version"""
