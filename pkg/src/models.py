from typing import List, Literal, Optional

from pydantic import BaseModel, Field

from .lattice.families import GroupSpec, family_subgroup
from .polyring.multipoly import MultiPoly
from .polyring.series import BinomialFactor, RationalSeries

# --- Run configuration ---


class RunConfig(BaseModel):
    family: str = Field(..., description="Family name or alias (a, b, d, i, g, g2, custom)", min_length=1)
    n: Optional[int] = Field(None, description="Number of coordinates (dim for custom)")
    N: Optional[int] = Field(None, description="Modulus (dihedral order, or custom modulus)")
    d: Optional[int] = Field(None, description="d of G(de,e,n)")
    e: Optional[int] = Field(None, description="e of G(de,e,n)")
    generators: List[List[int]] = Field(default_factory=list, description="Generators of a custom H")
    k: int = Field(2, description="Number of copies of V", ge=1)
    output_format: Literal["text", "json"] = Field("text", description="Report format")
    check_oracle: bool = Field(False, description="Cross-check against brute-force dimensions")
    depth: int = Field(4, description="Degree bound per variable for the oracle check", ge=0)
    cap: Optional[int] = Field(None, description="Enumeration cap for the engine", gt=0)
    oracle_cap: Optional[int] = Field(None, description="Enumeration cap for the oracle", gt=0)
    output: Optional[str] = Field(None, description="Write the report here instead of stdout")

    def build_spec(self) -> GroupSpec:
        return family_subgroup(
            self.family,
            cap=self.cap,
            n=self.n,
            N=self.N,
            d=self.d,
            e=self.e,
            generators=self.generators,
        )


# --- Report schema ---


class GroupInfo(BaseModel):
    family: str
    label: str
    N: int
    n: int
    orderH: int
    orderG: int
    degrees: Optional[List[int]] = None


class Term(BaseModel):
    exponents: List[int]
    coeff: str = Field(..., description="Exact coefficient as p/q")


class DenominatorFactor(BaseModel):
    var: int = Field(..., description="1-based variable index", ge=1)
    m: int = Field(..., ge=1)


class QPayload(BaseModel):
    polynomial: bool
    terms: List[Term]
    denominator: List[DenominatorFactor] = Field(default_factory=list)
    residual: List[Term] = Field(
        default_factory=list,
        description="Univariate num_1(h); when present Q also divides by num_1(h_i) for every i",
    )

    @classmethod
    def from_series(cls, q: RationalSeries, residual: Optional[MultiPoly] = None) -> "QPayload":
        return cls(
            polynomial=q.is_polynomial and residual is None,
            terms=[Term(**t) for t in q.numerator.to_payload()],
            denominator=[DenominatorFactor(var=f.var + 1, m=f.exponent) for f in q.denominator],
            residual=[Term(**t) for t in residual.to_payload()] if residual is not None else [],
        )

    def residual_poly(self) -> Optional[MultiPoly]:
        if not self.residual:
            return None
        return MultiPoly.from_payload(1, [t.model_dump() for t in self.residual])

    def to_series(self, k: int) -> RationalSeries:
        numerator = MultiPoly.from_payload(k, [t.model_dump() for t in self.terms])
        return RationalSeries(numerator, tuple(BinomialFactor(f.var - 1, f.m) for f in self.denominator))


class Mismatch(BaseModel):
    exponents: List[int]
    engine: str
    oracle: str


class OracleReport(BaseModel):
    checked: bool = False
    depth: Optional[int] = None
    agrees: Optional[bool] = None
    mismatches: List[Mismatch] = Field(default_factory=list)


class RunReport(BaseModel):
    group: GroupInfo
    k: int
    Q: QPayload
    rank: Optional[int] = None
    expected_rank: int
    separable: Optional[bool] = None
    scaled_limit: str
    limit_rank: str
    oracle: OracleReport = Field(default_factory=OracleReport)

    def q_series(self) -> RationalSeries:
        return self.Q.to_series(self.k)


class BatchError(BaseModel):
    spec: str
    error: str
    status: int
