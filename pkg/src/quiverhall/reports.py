"""Uniform verification reports.

Every verifier returns the same JSON-ready dictionary shape so that the CLI
can serialize without per-verifier cases:

    {"identity": ..., "window": ..., "cap": ..., "status": "pass"|"fail"|"residual",
     "checked": int, "residual_tuples": [...], "failures": [...]}

`failures` entries are {"class": ..., "lhs": str, "rhs": str} with the class
in its JSON form (list of ids, or list of [id, shift] pairs).  Reports are
deterministic: failure lists are assembled in catalog order by the callers.
"""

from __future__ import annotations


def class_json(c) -> list:
    """JSON form of a module class or a derived class."""
    return [list(x) if isinstance(x, tuple) else x for x in c]


def failure(c, lhs, rhs) -> dict:
    return {"class": class_json(c), "lhs": str(lhs), "rhs": str(rhs)}


def make_report(identity: str, cap, failures: list, *, window=None, residual_tuples=None, checked: int | None = None, extra: dict | None = None) -> dict:
    if failures:
        status = "fail"
    elif residual_tuples:
        status = "residual"  # caps exhausted before the identity settled
    else:
        status = "pass"
    report = {
        "identity": identity,
        "window": window,
        "cap": cap,
        "status": status,
        "residual_tuples": residual_tuples or [],
        "failures": failures,
    }
    if checked is not None:
        report["checked"] = checked
    if extra:
        report.update(extra)
    return report
