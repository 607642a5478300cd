"""Exception and warning types shared across the package."""


class CavdetError(Exception):
    """Base class for package errors."""


class ConfigError(CavdetError):
    """Invalid or inconsistent configuration input."""


class NoPhysicalRoot(CavdetError):
    """The stationary photon-number equation yielded no usable root.

    Cannot happen for physical inputs (a non-negative root exists for any
    eta^2 >= 0); raised only if the numerics go badly wrong.
    """


class StepTooLarge(CavdetError):
    """Integration step exceeds the stability or sampling bound."""


class NotResonant(CavdetError):
    """Operation requires delta_a = delta_c = 0."""


class NotDispersive(CavdetError):
    """Operation requires the pump on cavity resonance (delta_c = 0)."""


class NoMaximumInBounds(CavdetError):
    """Maximization bounds are empty, inverted, or nonpositive."""


class IllConditionedRootsWarning(UserWarning):
    """Stationary roots closer than the resolvable relative separation."""


class SmallDetuningWarning(UserWarning):
    """Dispersive formulas applied at detuning below the recommended range."""


class SaturationWarning(UserWarning):
    """Low-saturation formula evaluated outside its validity range."""


class QuasiStaticViolated(UserWarning):
    """Atom crosses a standing-wave period in less than ~10 cavity lifetimes."""


class ParaxialWarning(UserWarning):
    """Mode geometry outside the comfortable validity of the approximation."""
