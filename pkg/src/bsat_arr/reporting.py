"""Check-line records shared by the theorem-check reports and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

PASS = "pass"
FAIL = "fail"
UNVERIFIED = "unverified"
CONSISTENT = "consistent"
NOT_APPLICABLE = "not-applicable"

# Statuses that describe proved statements; a FAIL among these is a defect.
PROVED_STATUSES = (PASS, FAIL)


@dataclass(frozen=True)
class CheckLine:
    """One verification line: a named claim, the instance, and the outcome.

    ``statement`` is a self-contained description of the mathematical claim
    being checked; ``instance`` pins down the tested case.  ``status`` is
    "pass"/"fail" for proved statements and "consistent"/"unverified" for
    conjecture-level observations (which never fail a run).
    """

    name: str
    statement: str
    instance: str
    status: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "statement": self.statement,
            "instance": self.instance,
            "status": self.status,
        }

    @property
    def is_failure(self) -> bool:
        return self.status == FAIL
