from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError

BASE_HYPOTHESIS = "the generalized Brouncker fraction y(s, r) requires s > 0 and r > 1/2"


@dataclass(frozen=True)
class DomainPoint:
    """An argument pair (s, r) of y(s, r) and its derivatives."""

    s: float
    r: float

    @property
    def in_base_domain(self) -> bool:
        return self.s > 0 and self.r > 0.5

    @property
    def in_exponential_domain(self) -> bool:
        return self.in_base_domain and self.s > abs(self.r - 1)

    @property
    def in_second_derivative_domain(self) -> bool:
        return self.r > 0.5 and self.s > max(1.0, 2 * self.r - 1)

    def require_base(self) -> None:
        if not self.in_base_domain:
            raise DomainError(f"(s, r) = ({self.s!r}, {self.r!r}): {BASE_HYPOTHESIS}", BASE_HYPOTHESIS)

    def require(self, ok: bool, hypothesis: str) -> None:
        if not ok:
            raise DomainError(f"(s, r) = ({self.s!r}, {self.r!r}): {hypothesis}", hypothesis)
