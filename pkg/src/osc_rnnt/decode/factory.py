from typing import Callable, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, ValidationError

from osc_rnnt.config import DecoderSettings
from osc_rnnt.core.exceptions import DecoderSpecError, SearchBudgetError
from osc_rnnt.decode.exhaustive import decode_exhaustive
from osc_rnnt.decode.greedy import decode_greedy
from osc_rnnt.decode.hypothesis import DecodeOutput, ImprovedParams, OscParams
from osc_rnnt.decode.osc import decode_osc
from osc_rnnt.decode.osc_unbatched import decode_osc_unbatched
from osc_rnnt.decode.reference import decode_improved, decode_reference, decode_reference_instrumented
from osc_rnnt.logging.logger import get_logger
from osc_rnnt.model.weights import ModelWeights
from osc_rnnt.numerics import Matrix

logger = get_logger(__name__)

DecoderName = Literal["greedy", "ref", "improved", "osc", "osc-unbatched", "oracle"]

DECODER_NAMES = ("greedy", "ref", "improved", "osc", "osc-unbatched", "oracle")

# Which knobs each decoder understands
DECODER_OPTIONS: Dict[str, frozenset] = {
    "greedy": frozenset(),
    "ref": frozenset({"beam"}),
    "improved": frozenset({"beam", "expand_beam", "state_beam"}),
    "osc": frozenset({"beam", "alpha", "check_duplicates"}),
    "osc-unbatched": frozenset({"beam", "alpha", "check_duplicates"}),
    "oracle": frozenset({"max_len", "budget"}),
}


class DecoderSpec(BaseModel):
    """A decoder name plus the knobs it was given; unset knobs fall back to DecoderSettings."""

    name: DecoderName
    beam: Optional[int] = None
    alpha: Optional[int] = None
    expand_beam: Optional[float] = None
    state_beam: Optional[float] = None
    max_len: Optional[int] = None
    budget: Optional[int] = None
    check_duplicates: Optional[bool] = None

    model_config = ConfigDict(frozen=True, extra="forbid")

    @classmethod
    def parse(cls, text: str) -> "DecoderSpec":
        """
        Parse "name" or "name:key=value,key=value", e.g. "osc:beam=4,alpha=2".
        Keys use underscores or dashes ("expand-beam" == "expand_beam").
        """
        name, _, rest = text.strip().partition(":")
        fields: Dict[str, str] = {}
        for part in filter(None, (p.strip() for p in rest.split(","))):
            key, sep, value = part.partition("=")
            if not sep:
                raise DecoderSpecError(f"Malformed decoder option '{part}'", f"in '{text}'")
            fields[key.strip().replace("-", "_")] = value.strip()
        return cls.create(name=name.strip(), **fields)

    @classmethod
    def create(cls, **fields) -> "DecoderSpec":
        """Build and validate a spec, rejecting knobs the decoder does not use."""
        given = {k: v for k, v in fields.items() if v is not None}
        try:
            spec = cls(**given)
        except ValidationError as e:
            raise DecoderSpecError("Invalid decoder specification", str(e)) from e
        unused = set(given) - {"name"} - DECODER_OPTIONS[spec.name]
        if unused:
            raise DecoderSpecError(
                f"Decoder '{spec.name}' does not take {', '.join(sorted(unused))}",
            )
        return spec

    def resolved(self, defaults: DecoderSettings | None = None) -> "DecoderSpec":
        """Fill every knob this decoder uses from the settings."""
        defaults = defaults or DecoderSettings()
        values = {
            "beam": defaults.beam,
            "alpha": defaults.alpha,
            "expand_beam": defaults.expand_beam,
            "state_beam": defaults.state_beam,
            "max_len": defaults.oracle_max_len,
            "budget": defaults.oracle_budget,
            "check_duplicates": True,
        }
        update = {
            key: getattr(self, key) if getattr(self, key) is not None else values[key]
            for key in DECODER_OPTIONS[self.name]
        }
        return self.model_copy(update=update)

    @property
    def label(self) -> str:
        """Short display form naming the full configuration."""
        parts = [
            f"{key}={getattr(self, key)}"
            for key in ("beam", "alpha", "expand_beam", "state_beam", "max_len")
            if getattr(self, key) is not None
        ]
        if self.check_duplicates is False:
            parts.append("check_duplicates=false")
        return f"{self.name}:{','.join(parts)}" if parts else self.name


DecodeFn = Callable[..., DecodeOutput]


def run_decoder(
    spec: DecoderSpec,
    w: ModelWeights,
    features: Matrix | None,
    *,
    encoded: Matrix | None = None,
    trace: bool = False,
    instrument: bool = False,
    settings: DecoderSettings | None = None,
) -> DecodeOutput:
    """Decode one utterance with the decoder `spec` names."""
    settings = settings or DecoderSettings()
    spec = spec.resolved(settings)
    try:
        output = _dispatch(spec, w, features, encoded, trace, instrument, settings)
    except SearchBudgetError as e:
        logger.warning(f"{spec.label}: {e.message}", data={"details": e.details})
        raise
    logger.debug(
        f"{spec.label} decoded {output.frames_processed} frames",
        data={"labels": len(output.labels), "logp": output.logp, "counters": output.counters},
    )
    return output


def _dispatch(
    spec: DecoderSpec,
    w: ModelWeights,
    features: Matrix | None,
    encoded: Matrix | None,
    trace: bool,
    instrument: bool,
    settings: DecoderSettings,
) -> DecodeOutput:
    caps = {"max_pops_per_frame": settings.max_pops_per_frame}

    if spec.name == "greedy":
        return decode_greedy(w, features, encoded=encoded)
    if spec.name == "ref":
        fn = decode_reference_instrumented if instrument else decode_reference
        return fn(w, features, spec.beam, trace=trace, encoded=encoded, **caps)
    if spec.name == "improved":
        params = ImprovedParams(
            beam=spec.beam, expand_beam=spec.expand_beam, state_beam=spec.state_beam
        )
        return decode_improved(w, features, params, trace=trace, encoded=encoded, **caps)
    if spec.name in ("osc", "osc-unbatched"):
        params = OscParams(beam=spec.beam, alpha=spec.alpha, check_duplicates=spec.check_duplicates)
        fn = decode_osc if spec.name == "osc" else decode_osc_unbatched
        return fn(w, features, params, trace=trace, encoded=encoded)
    if spec.name == "oracle":
        return decode_exhaustive(w, features, spec.max_len, budget=spec.budget, encoded=encoded)
    raise DecoderSpecError(f"Unknown decoder '{spec.name}'")
