"""Exception types shared across the package."""


class HeavenlyError(ValueError):
    """Base class for all package-specific errors."""


class ContractViolationError(HeavenlyError):
    """An operation was called outside its stated preconditions."""


class DegreeMismatchError(ContractViolationError):
    """Series operands of different truncation degree were combined."""


class BranchPointError(HeavenlyError):
    """Fractional power of a series whose constant term vanishes."""


class BranchCutError(HeavenlyError):
    """Fractional power of a value too close to the principal branch cut."""

    def __init__(self, value):
        self.value = value
        super().__init__(f"base value {value} lies within 1e-6 of the branch cut")


class DenominatorError(HeavenlyError):
    """A named denominator of a closed-form expression vanished."""

    def __init__(self, name, value=None):
        self.name = name
        self.value = value
        super().__init__(f"denominator '{name}' vanishes" +
                         (f" (value {value})" if value is not None else ""))


class RealityViolationError(HeavenlyError):
    """A reality condition cannot be met; carries both sides of the inequality."""

    def __init__(self, lhs, rhs, detail=""):
        self.lhs = lhs
        self.rhs = rhs
        msg = f"reality condition violated: |{lhs}| > {rhs}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class PairingViolationError(HeavenlyError):
    """A point flagged as a real slice does not satisfy the conjugate pairing."""


class SamplingExhaustedError(HeavenlyError):
    """Rejection sampling failed to find enough admissible points."""

    def __init__(self, wanted, found, stats):
        self.wanted = wanted
        self.found = found
        self.stats = dict(stats)
        super().__init__(
            f"found only {found}/{wanted} admissible sample points; rejections: {self.stats}")


class SingularMetricError(HeavenlyError):
    """Metric not invertible at the base point."""
