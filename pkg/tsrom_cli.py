#!/usr/bin/env python
"""tsrom CLI entry point."""

from tsrom.cli.main import cli

if __name__ == "__main__":
    cli()
