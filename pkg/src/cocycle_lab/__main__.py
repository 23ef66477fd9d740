"""Allow running as `python -m cocycle_lab`."""

from cocycle_lab.cli import app

app()
