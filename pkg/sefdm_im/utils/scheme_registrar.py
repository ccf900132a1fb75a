# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

import logging

from sefdm_im.utils.exceptions import ConfigurationError


class SchemeRegistrar:
    """
    Scheme Registrar Class

    Maps a scheme family name (e.g. "IM-2") to the builder that lays out
    the slot roles of its special activation pattern. Families without a
    special pattern register under kind "traditional".
    """

    _traditional = {}
    _proposed = {}
    _display_names = {}

    def add(self, name, kind="proposed"):
        kind = kind.lower()

        def add_wrapper(builder):
            key = name.upper()
            if kind == "traditional":
                registry = self._traditional
            elif kind == "proposed":
                registry = self._proposed
            else:
                raise ConfigurationError(
                    f"Invalid scheme kind {kind}: only support traditional and proposed"
                )
            if key in self._traditional or key in self._proposed:
                raise ConfigurationError(
                    f"Scheme family {key} already registered, "
                    f"you may need to pick a different family name "
                )
            registry[key] = builder
            self._display_names[key] = name
            return builder

        return add_wrapper

    def get(self, name):
        key = name.upper()
        if key in self._proposed:
            logging.debug(f"returning proposed scheme family {key} ")
            return self._proposed[key]
        if key in self._traditional:
            logging.debug(f"returning traditional scheme family {key} ")
            return self._traditional[key]
        raise ConfigurationError(
            f"Scheme family {name} not found, "
            f"registered families: {sorted(self.names())}"
        )

    def is_proposed(self, name):
        key = name.upper()
        if not self.has_scheme(key):
            raise ConfigurationError(f"Scheme family {name} not found ")
        return key in self._proposed

    def canonical_name(self, name):
        """The family name as registered, e.g. "tra" -> "Tra"."""
        key = name.upper()
        if not self.has_scheme(key):
            raise ConfigurationError(f"Scheme family {name} not found ")
        return self._display_names[key]

    def has_scheme(self, name):
        key = name.upper()
        return key in self._traditional or key in self._proposed

    def names(self):
        keys = list(self._traditional) + list(self._proposed)
        return [self._display_names[key] for key in keys]


scheme_registrar = SchemeRegistrar()
