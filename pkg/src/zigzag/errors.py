"""Exception types raised across the package."""


class ZigzagError(Exception):
    pass


class FieldError(ZigzagError, ValueError):
    """Invalid field description or out-of-range field element."""


class SizeCapError(ZigzagError, ValueError):
    """Parameters exceed a configured size or enumeration cap."""


class ParamError(ZigzagError, ValueError):
    """Invalid code parameters."""


class SingularError(ZigzagError):
    """A linear system has no unique solution."""


class NotMDSError(SingularError):
    """An erasure pattern cannot be decoded."""

    def __init__(self, pattern, message=None):
        self.pattern = tuple(sorted(pattern))
        super().__init__(message or f"erasure pattern {set(self.pattern)} is not decodable")


class CorruptionError(ZigzagError):
    """Surviving data is inconsistent with every codeword."""


class SearchFailure(ZigzagError):
    """Coefficient search gave up without finding a valid assignment."""


class ShardError(ZigzagError):
    """Malformed, mismatched or corrupted shard file."""
