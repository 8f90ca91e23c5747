"""Python interface to the active sparse-halfspace learner.

The heavy lifting lives in the compiled ``_shal`` extension; this package
re-exports it with a couple of convenience helpers.
"""

from _shal import (
    ConfigError,
    DataError,
    angle,
    disagreement,
    hard_threshold,
    label_complexity_table,
    learn,
    lemma_panel,
    normalize,
    pnorm_grad,
    pnorm_grad_inverse,
    pnorm_params,
    run_experiment,
)

__all__ = [
    "ConfigError",
    "DataError",
    "angle",
    "disagreement",
    "hard_threshold",
    "label_complexity_table",
    "learn",
    "lemma_panel",
    "normalize",
    "pnorm_grad",
    "pnorm_grad_inverse",
    "pnorm_params",
    "run_experiment",
    "run_experiment_file",
]

__version__ = "0.1.0"


def run_experiment_file(config_path, jobs=1):
    """Run a sweep described by a JSON config file; returns the exit code."""
    with open(config_path, "r", encoding="utf-8") as handle:
        return run_experiment(handle.read(), jobs)
