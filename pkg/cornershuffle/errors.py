class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class CapExceeded(ValueError):
    def __init__(self, cap_name, cap, value):
        super().__init__(
            "%s exceeded: %s > %s (pass a larger cap to override)"
            % (cap_name, value, cap)
        )
        self.cap_name = cap_name
        self.cap = cap
        self.value = value


class InfeasibleDecomposition(RuntimeError):
    def __init__(self, n, message=None):
        super().__init__(
            message or "No valid helper pair exists for a %dx%d array" % (n, n)
        )
        self.n = n


class VerificationFailure(AssertionError):
    """A computed object does not satisfy a property it was built to have."""
