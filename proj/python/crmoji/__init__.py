"""Emoji-aware analysis of code review comments."""

import os as _os

# wheels ship the resource tables next to the module
_packaged = _os.path.join(_os.path.dirname(__file__), "data")
if "CRMOJI_DATA_DIR" not in _os.environ and _os.path.isdir(_packaged):
    _os.environ["CRMOJI_DATA_DIR"] = _packaged

from ._core import (
    Error,
    LoadError,
    Toolkit,
    UndefinedError,
    ValidationError,
    cohen_kappa,
    default_data_dir,
    mcc,
    pearson,
    run_h1,
    run_h2,
    stratified_folds,
)

__all__ = [
    "Error",
    "LoadError",
    "Toolkit",
    "UndefinedError",
    "ValidationError",
    "cohen_kappa",
    "default_data_dir",
    "mcc",
    "pearson",
    "run_h1",
    "run_h2",
    "stratified_folds",
]
