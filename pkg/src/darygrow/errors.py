"""Exception hierarchy shared by the whole package."""


class DarygrowError(Exception):
    """Base class for every error raised by this package."""


class ArityError(DarygrowError, ValueError):
    """Arity is out of range (d must be at least 2) or two objects disagree on d."""


class NotALeafError(DarygrowError, ValueError):
    """An operation that needs a leaf was handed an internal node."""


class RootSurgeryError(DarygrowError, ValueError):
    """Attempt to detach or strip the root where that is undefined."""


class StaleNodeError(DarygrowError, KeyError):
    """A node id does not reference a live arena slot."""


class MalformedCodeError(DarygrowError, ValueError):
    """A preorder code has wrong degrees, ends early, or has trailing symbols."""


class MarkCountError(DarygrowError, ValueError):
    """A marked object carries the wrong number of marks for the operation."""


class NotExcursionError(DarygrowError, ValueError):
    """A forest outside the excursion-type domain was passed to cut_inv."""


class CorruptForestError(DarygrowError, ValueError):
    """Forest reassembly could not find a marked leaf to plug into."""


class SizeGuardError(DarygrowError, ValueError):
    """An exhaustive enumeration would exceed the configured object budget."""


class UnderpoweredTestError(DarygrowError, ValueError):
    """A statistical test was requested with too few samples per class."""
