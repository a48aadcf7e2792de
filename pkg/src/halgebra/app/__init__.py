"""
Command-line application for halgebra.

This submodule provides the ``halg`` command and the helpers it uses to configure logging
and settings.
"""

from halgebra.app.cli import (
    build_parser,
    configure_logging,
    load_config,
    main,
)

__all__ = [
    "build_parser",
    "configure_logging",
    "load_config",
    "main",
]
