#!/usr/bin/env python3
"""
Errors Module
Exception types shared by the kernel, the numeric engines, the suite and the CLI
"""


class IdentityToolkitError(Exception):
    """Base class for every error raised by the toolkit"""


class DomainError(IdentityToolkitError, ValueError):
    """Argument outside the validated domain of a function"""


class KernelBoundsError(IdentityToolkitError):
    """Index beyond the configured exact-kernel cap"""

    def __init__(self, family: str, index: int, bound: int):
        self.family = family
        self.index = index
        self.bound = bound
        super().__init__(
            f"{family}: index {index} exceeds kernel bound {bound} "
            f"(raise kernel_max_index / kernel_max_triangle to opt in)"
        )


class UnknownIdentityError(IdentityToolkitError, KeyError):
    """Registry lookup for an id that does not exist"""

    def __init__(self, identity_id: str):
        self.identity_id = identity_id
        super().__init__(identity_id)

    def __str__(self):
        return f"unknown identity id: {self.identity_id}"


class ConfigError(IdentityToolkitError):
    """Malformed configuration file or invalid setting"""


class CancellationWarning(UserWarning):
    """Floating-point cancellation in a finite-difference sum exceeded the monitor threshold"""
