"""DAG-cell architecture search: encodings, surrogates, and search loops."""

from ._nasbo import *  # noqa: F401,F403
