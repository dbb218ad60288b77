"""Multi-matrix model workbench."""

import json

from ._mmwb import __version__, census, free_energy, moments, run_cli, sigma2, verify


def cli_json(*args):
    """Runs a CLI command and returns its parsed JSON document."""
    status, out, err = run_cli([str(a) for a in args])
    if status != 0:
        raise RuntimeError(f"mmwb exited with status {status}: {err.strip()}")
    return json.loads(out)


__all__ = ["__version__", "census", "cli_json", "free_energy", "moments", "run_cli", "sigma2", "verify"]
