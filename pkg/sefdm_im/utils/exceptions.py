# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

"""
Exceptions raised by sefdm_im. All of them subclass ValueError.
"""


class SefdmImError(ValueError):
    """Base class for every error raised by this package."""


class ConfigurationError(SefdmImError):
    """A parameter or run configuration value is outside its valid range."""


class SchemeValidationError(SefdmImError):
    """A scheme table violates one of the scheme invariants."""


class UsageError(SefdmImError):
    """An argument has the wrong length or shape."""


class DetectionConsistencyError(SefdmImError):
    """A detected activation pattern does not belong to the scheme table."""


class UndefinedInputError(SefdmImError):
    """The requested quantity is undefined for the given input."""
