"""Exceptions shared across the package.

The split matters for the CLI: malformed input (bad indices, unreadable
schema) exits with code 2, while a checked mathematical failure (a witness
was found) exits with code 1.
"""


class InputError(ValueError):
    """Structurally malformed input: out-of-range index, bad schema."""


class NotAPosetError(ValueError):
    """A category was used as a poset but has parallel morphisms."""

    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"objects {pair} are joined by more than one morphism")


class PreconditionError(RuntimeError):
    """A stated precondition of an operation does not hold."""


class PipelineError(RuntimeError):
    """A pipeline stage failed; carries the stage name."""

    def __init__(self, stage, message):
        self.stage = stage
        super().__init__(f"stage '{stage}': {message}")
