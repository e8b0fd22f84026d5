import math
from enum import Enum
from typing import List, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator


class NormKind(str, Enum):
    VECTOR_LP = "vector_lp"
    VECTOR_RMS = "vector_rms"
    FROBENIUS = "frobenius"
    SPECTRAL = "spectral"
    SCHATTEN = "schatten"
    INDUCED_L1_TO_LP = "induced_l1_to_lp"
    INDUCED_LP_TO_LINF = "induced_lp_to_linf"
    RMS_TO_RMS = "rms_to_rms"
    L1_TO_RMS = "l1_to_rms"


PARAMETRIC_KINDS = frozenset(
    {NormKind.VECTOR_LP, NormKind.SCHATTEN, NormKind.INDUCED_L1_TO_LP, NormKind.INDUCED_LP_TO_LINF}
)
VECTOR_KINDS = frozenset({NormKind.VECTOR_LP, NormKind.VECTOR_RMS})
INDUCED_KINDS = frozenset(
    {
        NormKind.SPECTRAL,
        NormKind.INDUCED_L1_TO_LP,
        NormKind.INDUCED_LP_TO_LINF,
        NormKind.RMS_TO_RMS,
        NormKind.L1_TO_RMS,
    }
)

INF = math.inf
_INF_SPELLINGS = {"inf", "+inf", "infinity", "∞"}


def _format_exponent(p: float) -> str:
    if p == INF:
        return "inf"
    return f"{p:g}"


class NormSpec(BaseModel):
    """Tagged norm descriptor. ``p`` is set only for the parametric kinds;
    ``math.inf`` stands for p = infinity and serializes as ``"inf"``."""

    model_config = ConfigDict(frozen=True)

    kind: NormKind
    p: Optional[float] = None

    @field_validator("p", mode="before")
    @classmethod
    def parse_infinity(cls, v):
        if isinstance(v, str) and v.strip().lower() in _INF_SPELLINGS:
            return INF
        return v

    @model_validator(mode="after")
    def check_exponent(self) -> "NormSpec":
        if self.kind in PARAMETRIC_KINDS:
            if self.p is None:
                raise ValueError(f"{self.kind.value} needs an exponent p")
            if math.isnan(self.p) or self.p < 1.0:
                raise ValueError(f"p must lie in [1, inf], got {self.p}")
        elif self.p is not None:
            raise ValueError(f"{self.kind.value} takes no exponent")
        return self

    @field_serializer("p")
    def dump_exponent(self, p: Optional[float]) -> Union[float, str, None]:
        if p is not None and p == INF:
            return "inf"
        return p

    @property
    def is_vector(self) -> bool:
        return self.kind in VECTOR_KINDS

    @property
    def label(self) -> str:
        if self.kind is NormKind.VECTOR_LP:
            return f"l{_format_exponent(self.p)}"
        if self.kind is NormKind.SCHATTEN:
            return f"S{_format_exponent(self.p)}"
        if self.kind is NormKind.INDUCED_L1_TO_LP:
            return f"l1->l{_format_exponent(self.p)}"
        if self.kind is NormKind.INDUCED_LP_TO_LINF:
            return f"l{_format_exponent(self.p)}->linf"
        return {
            NormKind.VECTOR_RMS: "rms",
            NormKind.FROBENIUS: "frobenius",
            NormKind.SPECTRAL: "spectral",
            NormKind.RMS_TO_RMS: "rms->rms",
            NormKind.L1_TO_RMS: "l1->rms",
        }[self.kind]

    def __str__(self) -> str:
        return self.label

    # Constructors

    @classmethod
    def lp(cls, p: Union[float, str]) -> "NormSpec":
        return cls(kind=NormKind.VECTOR_LP, p=p)

    @classmethod
    def rms(cls) -> "NormSpec":
        return cls(kind=NormKind.VECTOR_RMS)

    @classmethod
    def frobenius(cls) -> "NormSpec":
        return cls(kind=NormKind.FROBENIUS)

    @classmethod
    def spectral(cls) -> "NormSpec":
        return cls(kind=NormKind.SPECTRAL)

    @classmethod
    def schatten(cls, p: Union[float, str]) -> "NormSpec":
        return cls(kind=NormKind.SCHATTEN, p=p)

    @classmethod
    def nuclear(cls) -> "NormSpec":
        return cls.schatten(1.0)

    @classmethod
    def l1_to_lp(cls, p: Union[float, str]) -> "NormSpec":
        return cls(kind=NormKind.INDUCED_L1_TO_LP, p=p)

    @classmethod
    def lp_to_linf(cls, p: Union[float, str]) -> "NormSpec":
        return cls(kind=NormKind.INDUCED_LP_TO_LINF, p=p)

    @classmethod
    def l1_to_linf(cls) -> "NormSpec":
        """Max absolute entry."""
        return cls.lp_to_linf(1.0)

    @classmethod
    def rms_to_rms(cls) -> "NormSpec":
        return cls(kind=NormKind.RMS_TO_RMS)

    @classmethod
    def l1_to_rms(cls) -> "NormSpec":
        return cls(kind=NormKind.L1_TO_RMS)


class ModularEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    scale: float = Field(..., gt=0)
    norm: NormSpec


class ModularNormSpec(BaseModel):
    """Per-layer (scale, norm) pairs; the modular norm is max_l scale_l * ||W_l||_l."""

    model_config = ConfigDict(frozen=True)

    entries: List[ModularEntry] = Field(..., min_length=1)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def scales(self) -> List[float]:
        return [e.scale for e in self.entries]

    @property
    def norms(self) -> List[NormSpec]:
        return [e.norm for e in self.entries]

    @classmethod
    def from_lists(cls, scales: Sequence[float], norms: Sequence[NormSpec]) -> "ModularNormSpec":
        if len(scales) != len(norms):
            raise ValueError(f"got {len(scales)} scales for {len(norms)} norms")
        return cls(entries=[ModularEntry(scale=s, norm=n) for s, n in zip(scales, norms)])

    @classmethod
    def uniform(cls, norm: NormSpec, layers: int, scale: float = 1.0) -> "ModularNormSpec":
        return cls.from_lists([scale] * layers, [norm] * layers)
