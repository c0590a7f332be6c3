"""Exception taxonomy for the engine.

Every failure mode that callers are expected to handle gets its own class so
that the CLI can map errors onto exit codes without string matching.  All
classes derive from :class:`QuiverHallError`.
"""


class QuiverHallError(Exception):
    """Base class for all engine errors."""


class UnsupportedQuiver(QuiverHallError):
    """A quiver preset outside the supported type-A family was requested."""


class DimensionMismatch(QuiverHallError):
    """A dimension vector or matrix shape does not match its quiver."""


class FieldMismatch(QuiverHallError):
    """Two objects over different coefficient fields were combined."""


class CatalogInsufficient(QuiverHallError):
    """A decomposition needs indecomposables beyond the catalog cap."""


class CapExceeded(QuiverHallError):
    """An enumeration would exceed the configured work cap."""


class NoStabilization(QuiverHallError):
    """Polynomial interpolation failed to stabilize within the prime budget."""


class BadConstantTerm(QuiverHallError):
    """exp/log applied to a series with the wrong constant coefficient."""


class ZeroVector(QuiverHallError):
    """A slope or phase was requested for the zero dimension vector."""


class ZeroCharge(QuiverHallError):
    """A phase was requested for a class with zero central charge."""


class ZeroObject(QuiverHallError):
    """An HN filtration was requested for the zero object."""


class NonUniqueMaximal(QuiverHallError):
    """The maximal destabilizing subobject was not unique (engine bug)."""


class WindowExceeded(QuiverHallError):
    """A shift landed outside the configured shift window."""


class UndefinedPhase(QuiverHallError):
    """phi_m was requested for a class whose central charge is zero."""


class UnsupportedHeart(QuiverHallError):
    """A heart specification outside the supported families was given."""


class InvalidSpec(QuiverHallError):
    """A stability-condition specification failed validation."""


class ImpossibleConfiguration(QuiverHallError):
    """A configuration the theory excludes was detected (engine bug)."""


class RowUnrealized(QuiverHallError):
    """A classification-table row could not be realized by any witness."""


class NoLabel(QuiverHallError):
    """No textual silting label exists for the requested row."""


class Mismatch(QuiverHallError):
    """Cross-validation between two independent routes disagreed."""


class CommutationFailure(QuiverHallError):
    """An expected commutator did not vanish (falsifies a precondition)."""
