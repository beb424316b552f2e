class IhomlError(Exception):
    pass


class CarrierTooLarge(IhomlError):
    def __init__(self, ty, size_desc, cap):
        self.ty = ty
        self.cap = cap
        super().__init__(f"carrier of {ty!r} has {size_desc} elements, cap is {cap}")


class CarrierSizeOverflow(CarrierTooLarge, OverflowError):
    """Size is too large to even represent as an exact integer."""


class FrameClassViolation(IhomlError):
    pass


class TypeMismatch(IhomlError):
    pass


class EmptyDomain(IhomlError):
    pass


class UnboundSymbol(IhomlError):
    pass


class TypeCheckError(IhomlError):
    """Ill-typed term. Carries the offending subterm and the expected/found types."""

    def __init__(self, message, term=None, expected=None, found=None, span=None):
        self.term = term
        self.expected = expected
        self.found = found
        self.span = span
        detail = message
        if expected is not None or found is not None:
            detail += f" (expected {expected!r}, found {found!r})"
        if span is not None:
            detail += f" at {span}"
        super().__init__(detail)


class NotAPrimitive(IhomlError):
    pass


class NotApplicable(IhomlError):
    pass


class ParseError(IhomlError):
    def __init__(self, message, span=None):
        self.span = span
        super().__init__(f"{message} at {span}" if span is not None else message)


class BudgetExhausted(IhomlError):
    pass
