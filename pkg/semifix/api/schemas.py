"""
Pydantic schemas for configuration and report files

Rationals travel as "p/q" strings, roots of unity as exponent rationals and
cyclotomic numbers as coefficient lists. There is no floating point in
either format.
"""

from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

FORMAT_VERSION = "1"


def _rational_string(value: Any) -> str:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ValueError(f"expected a rational string 'p/q', got {value!r}")
    try:
        Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"'{value}' is not a rational 'p/q'")
    return str(value).strip()


# --- Config schemas ---

class ScalarSpec(BaseModel):
    """
    One scalar of a setup. Exactly one variant is given:

        {zeta_exp, val}    loop monomial e^(2 pi i zeta_exp) * tau^val
        {zeta_exp}         root of unity in Q(zeta_M)
        {cyclo_coeffs}     element of Q(zeta_M) in the power basis
        {f_coords}         rank-2 F-element in the presentation basis
    """
    model_config = ConfigDict(extra="forbid")

    zeta_exp: Optional[str] = None
    val: Optional[str] = None
    cyclo_coeffs: Optional[List[str]] = None
    f_coords: Optional[List["ScalarSpec"]] = None

    @field_validator("zeta_exp", "val", mode="before")
    @classmethod
    def check_rational(cls, v):
        return None if v is None else _rational_string(v)

    @field_validator("cyclo_coeffs", mode="before")
    @classmethod
    def check_coeffs(cls, v):
        if v is None:
            return None
        if not isinstance(v, list) or not v:
            raise ValueError("cyclo_coeffs must be a non-empty list")
        return [_rational_string(x) for x in v]

    @field_validator("f_coords")
    @classmethod
    def check_f_coords(cls, v):
        if v is not None:
            if len(v) != 2:
                raise ValueError(f"f_coords needs 2 entries, got {len(v)}")
            if any(entry.f_coords is not None for entry in v):
                raise ValueError("f_coords entries must be k-scalars")
        return v

    @model_validator(mode="after")
    def check_variant(self):
        given = [name for name in ("zeta_exp", "cyclo_coeffs", "f_coords") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError("give exactly one of zeta_exp, cyclo_coeffs, f_coords")
        if self.val is not None and self.zeta_exp is None:
            raise ValueError("val is only valid together with zeta_exp")
        return self

    @property
    def variant(self) -> str:
        if self.f_coords is not None:
            return "f_coords"
        if self.cyclo_coeffs is not None:
            return "cyclo_coeffs"
        return "loop" if self.val is not None else "zeta_exp"


class MultiplicityEntry(BaseModel):
    """Multiplicity d of the vertex named by a selector (id or canonical b-value)"""
    model_config = ConfigDict(extra="forbid")

    vertex: str = Field(min_length=1)
    d: int = Field(ge=0)


class ConfigFile(BaseModel):
    """A setup file"""
    model_config = ConfigDict(extra="forbid")

    format: Literal["1"] = FORMAT_VERSION
    regime: Literal["numberfield", "loop"]
    M: int = Field(default=1, ge=1)
    n: int = Field(default=1, ge=1)
    m: int = Field(ge=1)
    mode: Literal["linear", "polarized"] = "polarized"
    epsilon: Literal[1, -1] = 1
    sigma: Literal["identity", "zeta_half", "minus_t", "conj"] = "identity"
    presentation: Literal["trivial", "split", "quadratic"] = "trivial"
    d: Optional[int] = None
    beta: ScalarSpec
    c: Optional[ScalarSpec] = None
    gamma: Optional[ScalarSpec] = None
    xi: ScalarSpec
    multiplicities: List[MultiplicityEntry] = Field(default_factory=list)
    seed: int = 0
    trials: int = Field(default=5, ge=1)

    @field_validator("d")
    @classmethod
    def check_discriminant(cls, v):
        if v is not None and v == 0:
            raise ValueError("quadratic discriminant must be nonzero")
        return v

    @field_validator("multiplicities")
    @classmethod
    def check_unique_selectors(cls, v):
        selectors = [entry.vertex for entry in v]
        duplicates = sorted({s for s in selectors if selectors.count(s) > 1})
        if duplicates:
            raise ValueError(f"duplicate vertex selectors {duplicates}")
        return v

    @model_validator(mode="after")
    def check_regime_fields(self):
        if self.regime == "numberfield":
            if self.n > 2:
                raise ValueError("the numberfield regime supports n <= 2")
            if self.gamma is not None:
                raise ValueError("gamma is only accepted in the loop regime; give c")
        else:
            if self.presentation != "trivial" or self.d is not None:
                raise ValueError("presentation and d apply to the numberfield regime only")
        if self.presentation == "quadratic" and self.d is None:
            raise ValueError("presentation 'quadratic' needs the discriminant d")
        if self.c is not None and self.gamma is not None:
            raise ValueError("give c or gamma, not both")
        return self


# --- Report schemas ---

class DimRangeEntry(BaseModel):
    low: int
    high: int


class DimsEntry(BaseModel):
    H: DimRangeEntry
    g_xi: DimRangeEntry


class PredictedDimsEntry(BaseModel):
    """Dimensions over k^sigma (k in linear mode) and over Q when defined"""
    over: str
    dims: DimsEntry
    prime_field: Optional[DimsEntry] = None


class VertexEntry(BaseModel):
    id: str
    b_value: str
    residue_degree: int
    division_degree: int = 1
    multiplicity: int = 0
    star: Optional[str] = None
    sigma_c_fixed: Optional[bool] = None


class ArrowEntry(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    source: str = Field(alias="from")
    to: str
    star_fixed: Optional[bool] = None
    sigma_cxi_fixed: Optional[bool] = None


class FactorEntry(BaseModel):
    kind: str
    vertices: List[str]
    base_field: str
    weil_degree: int
    provenance: str = ""
    flags: List[str] = Field(default_factory=list)
    options: Optional[List[str]] = None


class EdgeEntry(BaseModel):
    kind: str
    source: str
    target: str
    base_field: str
    weil_degree: int
    provenance: str = ""
    options: Optional[List[str]] = None


class ComponentEntry(BaseModel):
    shape: str
    kind: str
    ell: int
    labels: List[List[str]]
    factors: List[FactorEntry]
    edge_spaces: List[EdgeEntry]
    sign_provenance: List[str] = Field(default_factory=list)
    flags: List[str] = Field(default_factory=list)


class ReportFile(BaseModel):
    """The classify / verify output document"""
    format: Literal["1"] = FORMAT_VERSION
    params: Dict[str, Any]
    vertices: List[VertexEntry]
    arrows: List[ArrowEntry]
    components: List[ComponentEntry]
    predicted_dims: Optional[PredictedDimsEntry] = None
    quiver_text: str = ""
    flags: List[str] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)
    verification: Optional[Dict[str, Any]] = None
    loop_case: Optional[Dict[str, Any]] = None


ScalarSpec.model_rebuild()
