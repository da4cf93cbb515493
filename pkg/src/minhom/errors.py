"""Exception hierarchy shared by all modules.

Each class carries an ``exit_code`` used by the command line front end.
"""


class MinhomError(Exception):
    exit_code = 1


class InputError(MinhomError):
    exit_code = 2


class ParseError(InputError):
    pass


class DegenerateInput(InputError):
    pass


class NormalityViolation(InputError):
    """The curve touches itself non-transversally.

    ``params`` holds ``(segment_i, segment_j, kind)`` tuples for every
    offending contact so that a caller can hand them to
    :func:`minhom.curve.perturb_to_normal`.
    """

    def __init__(self, message, params=()):
        super().__init__(message)
        self.params = list(params)


class PerturbationFailed(InputError):
    pass


class NotASelfCrossing(MinhomError):
    pass


class OnCurve(MinhomError):
    pass


class TopologyError(MinhomError):
    pass


class NumericalInstability(MinhomError):
    pass


class InconsistentWitness(MinhomError):
    pass


class InvalidDecomposition(MinhomError):
    pass


class MoveNotApplicable(MinhomError):
    pass


class Disconnected(InputError):
    pass


class CapExceeded(MinhomError):
    exit_code = 3
