"""Python access to the realstab core.

Matrices use the system-file encoding: a list of rows whose entries are
rational strings ("1/2"), integers, or {"num": [...], "den": [...]} with
ascending coefficients in z.
"""

import json

from ._realstab import Error, __version__, run
from ._realstab import analyze_json as _analyze
from ._realstab import hinf_norm_json as _hinf_norm
from ._realstab import inverse_json as _inverse
from ._realstab import stability_status_json as _status

__all__ = ["Error", "__version__", "run", "analyze", "hinf_norm", "stability_status", "inverse"]


def _text(x):
    return x if isinstance(x, str) else json.dumps(x)


def analyze(system):
    """Verdict, stability matrix and identity check for a system description."""
    return json.loads(_analyze(_text(system)))


def hinf_norm(matrix):
    return _hinf_norm(_text(matrix))


def stability_status(matrix):
    return _status(_text(matrix))


def inverse(matrix):
    """Exact inverse, in the same encoding."""
    return json.loads(_inverse(_text(matrix)))
