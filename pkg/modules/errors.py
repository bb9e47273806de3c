#!/usr/bin/env python3

""" Exceptions raised by ridley. """


class RidleyError(Exception):
    """Root of every error ridley raises on purpose."""


class InvalidArgumentError(RidleyError, ValueError):
    """An operation was called with arguments outside its contract."""


class ConfigurationError(RidleyError, ValueError):
    """A campaign configuration names something that cannot be resolved."""


class ReportError(RidleyError, OSError):
    """The output directory or a report file could not be written."""
