"""Exception types shared across the package."""


class NotOddPrime(ValueError):
    pass


class SizeGuardExceeded(ValueError):
    """Raised before an enumeration whose predicted cost exceeds a guard."""

    def __init__(self, what, cost, limit):
        self.what = what
        self.cost = cost
        self.limit = limit
        super().__init__(f"{what}: predicted cost {cost} exceeds guard {limit}")


class FieldMismatch(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class ModulusMismatch(ValueError):
    pass


class InvalidAutomorphism(ValueError):
    pass


class NotQuadratic(ValueError):
    """The supplied table is not a quadratic form; ``witness`` pins the failing input."""

    def __init__(self, message, witness):
        self.witness = witness
        super().__init__(f"{message} (witness {witness})")


class NotInImage(ValueError):
    pass


class InternalSearchFailure(RuntimeError):
    pass


class HypothesisViolated(ValueError):
    pass


class WitnessVerificationFailed(RuntimeError):
    pass
