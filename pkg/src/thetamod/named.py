"""Registry of forms addressable by name from the command line.

Names: ``delta``, ``e4``, ``e6``, ``gk:<k>``, ``ek:<k>`` and products
``a*b`` of those.  ``theta:<name>`` and ``g2`` are series rather than forms
and are handled by the callers that accept them.
"""
from __future__ import annotations

import json
from pathlib import Path

from .forms import Form, delta_form, eisenstein_form
from .qseries import QQ, ZZ


class UnknownForm(ValueError):
    pass


def _atom(name: str) -> Form:
    if name == "delta":
        return delta_form()
    if name in ("e4", "e6"):
        return eisenstein_form(int(name[1:]), ZZ)
    if name in ("1", "one"):
        return Form(0, (1,), ZZ)
    kind, _, weight = name.partition(":")
    if kind in ("gk", "ek") and weight.isdigit():
        k = int(weight)
        form = eisenstein_form(k, QQ, normalized=(kind == "ek"))
        return _integral_if_possible(form)
    raise UnknownForm(f"unknown form name {name!r}")


def _integral_if_possible(form: Form) -> Form:
    if form.ring.kind == "Q" and all(c.denominator == 1 for c in form.coords):
        return form.change_ring(ZZ)
    return form


def resolve_form(name: str) -> Form:
    """Form named by ``name``; products are taken over Z when both factors are integral."""
    name = name.strip().lower()
    factors = [_atom(part.strip()) for part in name.split("*")]
    result = factors[0]
    for other in factors[1:]:
        if result.ring != other.ring:
            result, other = result.change_ring(QQ), other.change_ring(QQ)
        result = result * other
    return _integral_if_possible(result)


def load_form(path: str | Path) -> Form:
    """Read a form from a JSON file ``{"weight": k, "coords": [...], "ring": ...}``."""
    return Form.from_dict(json.loads(Path(path).read_text()))
