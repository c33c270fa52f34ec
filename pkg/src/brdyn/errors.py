"""Exception hierarchy.

Every error carries a short machine ``code`` used by the command line tool
for its ``ERROR <code>`` line.
"""


class GameError(Exception):
    code = "error"


class EmptySubset(GameError):
    code = "empty_subset"


class OutOfRange(GameError):
    code = "out_of_range"


class TooFewPlayers(GameError):
    code = "too_few_players"


class NotAPermutation(GameError):
    code = "not_a_permutation"


class TwoPlayerOnly(GameError):
    code = "two_player_only"


class NotPayoffMode(GameError):
    code = "not_payoff_mode"


class CyclicPreference(GameError):
    code = "cyclic_preference"


class NotAlternating(GameError):
    code = "not_alternating"


class NotConvertible(GameError):
    code = "not_convertible"


class BadShape(GameError):
    code = "bad_shape"


class BadPath(GameError):
    code = "bad_path"


class HypothesisViolated(GameError):
    code = "hypothesis_violated"


class NotAntagonist(HypothesisViolated):
    code = "not_antagonist"


class NoNE(HypothesisViolated):
    code = "no_ne"


class BadLambda(GameError):
    code = "bad_lambda"


class BadEps(GameError):
    code = "bad_eps"


class XAbsent(GameError):
    code = "x_absent"


class ForbiddenRectanglePresent(HypothesisViolated):
    code = "forbidden_rectangle_present"


class PartitionTooCoarse(HypothesisViolated):
    code = "partition_too_coarse"


class DecompositionFailed(GameError):
    """Raised when a rectangle-free structure admits no decomposition step.

    Should never happen; treat it as a bug.
    """

    code = "decomposition_failed"


class ParseError(GameError):
    code = "parse_error"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ArityMismatch(ParseError):
    code = "arity_mismatch"


class UnknownOutcome(ParseError):
    code = "unknown_outcome"


class UnknownFixture(GameError):
    code = "unknown_fixture"
