"""Exception hierarchy.

Every error carries the name of the module and the invariant it guards so
the CLI can report failures in machine-readable form.
"""


class RelMorseError(ValueError):
    module = "relmorse"
    invariant = "unspecified"

    def __init__(self, message, *, invariant=None):
        super().__init__(message)
        if invariant is not None:
            self.invariant = invariant

    def as_dict(self):
        return {
            "error": type(self).__name__,
            "module": self.module,
            "invariant": self.invariant,
            "message": str(self),
        }


class DomainError(RelMorseError):
    module = "units_core"
    invariant = "parameter domain"


class ParseError(RelMorseError):
    module = "units_core"
    invariant = "molecule file grammar"

    def __init__(self, message, lineno):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ValidationError(RelMorseError):
    module = "units_core"
    invariant = "MoleculeRecord"


class LevelOutOfRangeError(RelMorseError):
    module = "spectra"
    invariant = "n <= N_max"


class UnboundLevelError(LevelOutOfRangeError):
    invariant = "Lambda - 1/2 - N > 0"


class ChannelError(RelMorseError):
    module = "pekeris"
    invariant = "SpinAngularChannel"


class DegenerateChannelError(ChannelError):
    invariant = "1 - B/2A > 0"


class SingularExpansionError(RelMorseError):
    module = "pekeris"
    invariant = "gamma*r_e + f(1) != 0"


class InvalidCouplingError(RelMorseError):
    module = "pekeris"
    invariant = "CouplingSpec invertibility"


class SingularityError(RelMorseError):
    module = "riccati"
    invariant = "regular domain"

    def __init__(self, message, abscissa):
        super().__init__(message)
        self.abscissa = abscissa


class ClosureError(RelMorseError):
    module = "riccati"
    invariant = "dU/dr = a2 U^2 + a1 U + a0"


class EmptySpectrumError(RelMorseError):
    module = "thermo"
    invariant = "SpectrumTable non-empty"


class GridError(RelMorseError):
    module = "oracle"
    invariant = "GridProblem"


class BoundaryLeakError(GridError):
    invariant = "eigenfunction decay at box edges"


class ConfigError(RelMorseError):
    module = "cli"
    invariant = "RunConfig"
