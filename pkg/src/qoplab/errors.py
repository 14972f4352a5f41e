"""Exception hierarchy shared by every layer."""


class QoplabError(Exception):
    """Base class for all library errors."""


class ParameterError(QoplabError, ValueError):
    """A parameter violates a precondition (zero spectral parameter, q**2 == 1, ...)."""


class PoleError(ParameterError):
    """An operator was requested exactly at (or numerically on) one of its poles."""


class RootOfUnityError(ParameterError):
    """q is (close to) a low-order root of unity and the override flag was not given."""


class GeneratorError(QoplabError, ValueError):
    """A generator does not act on the requested module (e.g. f1 on M(z, s))."""


class DegenerateIntertwiner(QoplabError):
    """The intertwiner equations do not have a unique, invertible solution."""


class DecompositionError(QoplabError):
    """A sub/quotient module decomposition could not be located."""
