"""Exception hierarchy shared by all modules."""


class ReebTorusError(Exception):
    pass


class SchemaError(ReebTorusError):
    """The input document is malformed (missing/unknown fields, bad types, bad rationals)."""


class InvariantViolation(ReebTorusError):
    """A structural invariant of a tree or instance does not hold.

    ``invariant`` names the violated rule, ``ids`` lists the offending vertex/edge ids.
    """

    def __init__(self, invariant, ids=(), detail=""):
        self.invariant = invariant
        self.ids = tuple(ids)
        self.detail = detail
        msg = f"invariant '{invariant}' violated"
        if self.ids:
            msg += f" at {', '.join(map(str, self.ids))}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class UnsupportedSurface(ReebTorusError):
    pass


class ShapeMismatch(ReebTorusError):
    pass


class CapExceeded(ReebTorusError):
    def __init__(self, size, cap, what="group"):
        self.size = size
        self.cap = cap
        super().__init__(f"{what} size {size} exceeds cap {cap}")


class NotAPieceGroup(ReebTorusError):
    pass


class DimensionMismatch(ReebTorusError):
    pass


class NotFree(ReebTorusError):
    pass
