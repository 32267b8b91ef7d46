"""Error types shared across the pipeline."""


class DataError(Exception):
    """Bad input data: unreadable corpus, malformed record, unknown id.

    CLI maps this to exit code 2; usage errors exit 1.
    """


class UsageError(Exception):
    """Bad invocation: missing stage prerequisite, invalid parameter."""
