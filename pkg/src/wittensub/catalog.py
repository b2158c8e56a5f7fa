"""Built-in example potentials with expected behavior.

Each entry re-parses and re-verifies on demand; the expected fields make
the catalog a regression harness for the analyzer and the sweep.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .poly import UnivariatePoly, parse_poly


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    potential: str
    expected_h1: str  # "holds" | "fails" | "undecided"
    expected_exponent: Optional[float]  # fitted log-log slope, if pinned
    exponent_band: Optional[tuple]  # acceptance band for the slope
    note: str
    box: float = 0.5  # half-width used when re-verifying the entry
    lambda_count: int = 8  # geometric schedule length for the sweep

    def poly(self):
        return parse_poly(self.potential)


ENTRIES = [
    CatalogEntry(
        name="maire-l1",
        potential="x^3 - x*y^2",
        expected_h1="holds",
        expected_exponent=2.0 / 3.0,
        exponent_band=(0.60, 0.73),
        note="odd-power saddle family, first member; optimal gain 1/3",
    ),
    CatalogEntry(
        name="maire-l2",
        potential="x^5 - x*y^2",
        expected_h1="holds",
        expected_exponent=2.0 / 5.0,
        exponent_band=(0.33, 0.47),
        note="odd-power saddle family, second member; optimal gain 1/5",
        box=0.25,
        lambda_count=10,
    ),
    CatalogEntry(
        name="maire-l3",
        potential="x^7 - x*y^2",
        expected_h1="holds",
        expected_exponent=2.0 / 7.0,
        exponent_band=None,
        note="odd-power saddle family, third member",
        box=0.25,
        lambda_count=10,
    ),
    CatalogEntry(
        name="well",
        potential="1/2*x^2 + 1/2*y^2",
        expected_h1="fails",
        expected_exponent=None,
        exponent_band=None,
        note="local minimum: flat branch with zero slope, no scaling",
    ),
    CatalogEntry(
        name="elliptic",
        potential="-1/2*x^2 - 1/2*y^2",
        expected_h1="holds",
        expected_exponent=1.0,
        exponent_band=(0.95, 1.05),
        note="local maximum: vacuous sign-change check, oscillator scaling",
    ),
    CatalogEntry(
        name="shear",
        potential="1/2*x^2 + x*y",
        expected_h1="holds",
        expected_exponent=None,
        exponent_band=None,
        note="tilted quadratic: single unit-slope branch",
    ),
    CatalogEntry(
        name="zero",
        potential="0",
        expected_h1="holds",
        expected_exponent=0.0,
        exponent_band=(-0.01, 0.01),
        note="free Dirichlet Laplacian; eigenvalue independent of lambda",
    ),
]


def by_name(name: str) -> CatalogEntry:
    for entry in ENTRIES:
        if entry.name == name:
            return entry
    raise KeyError(name)


# compliant one-variable sections used by the 1-D inequality suite:
# no minus-to-plus transition on (-1, 1)
COMPLIANT_SECTIONS = {
    "neg-linear": UnivariatePoly([0, -1]),
    "neg-cubic": UnivariatePoly([0, 0, 0, -1]),
    "shoulder": UnivariatePoly([0, 0, 1, -1]),  # s^2 - s^3
    "neg-constant": UnivariatePoly([-1]),
    "zero": UnivariatePoly.zero(),
}
