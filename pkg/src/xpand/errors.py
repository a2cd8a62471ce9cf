"""Exception hierarchy shared by the whole package.

The CLI maps these onto exit codes: LimitError means the request was valid
but refused (exit 1), InputError and its subclasses mean the request itself
was malformed (exit 2).
"""


class XpandError(Exception):
    """Base class for all package errors."""


class InputError(XpandError):
    """Malformed input: bad node ids, bad parameters, wrong graph shape."""


class LoadError(InputError):
    """A graph or pattern file violates the on-disk format."""


class LimitError(XpandError):
    """The instance exceeds a configured analysis limit; refused, not failed."""


class GenerationError(XpandError):
    """A randomized generator exhausted its retry budget."""


class SamplingError(XpandError):
    """A rejection sampler produced no accepted sample."""


class NoSteinerTreeError(XpandError):
    """Terminals fall in different components, so no connecting tree exists."""


class ContractError(XpandError):
    """A guaranteed bound was violated at runtime; indicates a real bug."""
