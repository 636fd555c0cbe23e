"""Exception types shared across the package."""


class AlphabetError(ValueError):
    """A word contains a symbol outside the machine's input alphabet."""

    def __init__(self, symbol: str, position: int):
        self.symbol = symbol
        self.position = position
        super().__init__(
            f"symbol {symbol!r} at position {position} is not in the input alphabet"
        )


class TableCompletionError(ValueError):
    """A partial transition table cannot be extended to a unitary."""


class SpecFormatError(ValueError):
    """A machine definition file is malformed."""


class RecipeError(ValueError):
    """A chemical recipe is malformed or names an unknown species."""


class NondeterministicPdaError(ValueError):
    """Two pushdown transitions apply to the same configuration."""
