from osc_rnnt.decode.exhaustive import ExhaustiveResult, decode_exhaustive, exhaustive_decode
from osc_rnnt.decode.factory import DECODER_NAMES, DecoderSpec, run_decoder
from osc_rnnt.decode.greedy import decode_greedy
from osc_rnnt.decode.hypothesis import (
    Beam,
    DecodeCounters,
    DecodeOutput,
    Hypothesis,
    ImprovedParams,
    OscParams,
    StepStats,
    select_final,
)
from osc_rnnt.decode.osc import decode_osc
from osc_rnnt.decode.osc_unbatched import decode_osc_unbatched
from osc_rnnt.decode.prefix import prefix_extension_logprob
from osc_rnnt.decode.reference import decode_improved, decode_reference, decode_reference_instrumented
from osc_rnnt.decode.stats import StepRatioTable, aggregate_step_stats

__all__ = [
    "DECODER_NAMES",
    "Beam",
    "DecodeCounters",
    "DecodeOutput",
    "DecoderSpec",
    "ExhaustiveResult",
    "Hypothesis",
    "ImprovedParams",
    "OscParams",
    "StepRatioTable",
    "StepStats",
    "aggregate_step_stats",
    "decode_exhaustive",
    "decode_greedy",
    "decode_improved",
    "decode_osc",
    "decode_osc_unbatched",
    "decode_reference",
    "decode_reference_instrumented",
    "exhaustive_decode",
    "prefix_extension_logprob",
    "run_decoder",
    "select_final",
]
