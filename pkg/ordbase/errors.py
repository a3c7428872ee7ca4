"""
Exceptions raised by ordbase.

Semi-decisions never raise: running out of budget is reported through the
Stall and NotWithinBudget values in ordbase.enumerated.
"""


class OrdbaseError(Exception):
    pass


class ParseError(OrdbaseError):
    pass


class UnknownElement(OrdbaseError):
    pass


class AntisymmetryViolation(OrdbaseError):
    def __init__(self, cycle: list):
        self.cycle = cycle
        super().__init__(f"Order relation has a cycle among distinct elements: {' -> '.join(map(str, cycle))}")


class SizeLimit(OrdbaseError):
    def __init__(self, size: int, bound: int):
        self.size = size
        self.bound = bound
        super().__init__(f"Poset of size {size} exceeds the exhaustive enumeration bound {bound}")


class InvalidElement(OrdbaseError, ValueError):
    pass


class NotWeakBasis(OrdbaseError):
    pass


class PreconditionFailed(OrdbaseError):
    pass


class BottomInput(OrdbaseError):
    pass


class NotWayBelow(OrdbaseError):
    pass


class NotDirected(OrdbaseError):
    pass


class ConstructionError(OrdbaseError):
    """A construction backed by a theorem produced an output violating its postcondition."""
