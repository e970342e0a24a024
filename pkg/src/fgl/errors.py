"""Exception types shared by all fgl modules."""


class DomainError(ValueError):
    """A precondition on an operation's inputs was violated."""


class InternalInvariantError(RuntimeError):
    """A "cannot happen" condition was hit; indicates a bug or a false
    mathematical assumption, never bad user input."""
