"""Exception hierarchy shared by every specmimo module."""


class SpecMimoError(Exception):
    """Base class for all errors raised by specmimo."""


class GeometryError(SpecMimoError, ValueError):
    """An array placement or angle falls outside its admissible range."""


class GuardError(SpecMimoError):
    """A numerical validity limit of the contour quadrature was exceeded.

    The semi-elliptical contour is only reliable while the transverse
    antenna separation stays below 3600 wavelengths; beyond that the
    Bessel factor oscillates too quickly and a steepest-descent path
    would be required.
    """

    def __init__(self, message, pair=None, ratio=None):
        super().__init__(message)
        self.pair = pair
        self.ratio = ratio


class ConvergenceError(SpecMimoError):
    """The evanescent tail integral did not decay within its panel budget."""


class ConfigError(SpecMimoError, ValueError):
    """An experiment configuration failed schema validation."""
