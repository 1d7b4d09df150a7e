from osc_rnnt.io.feature_file import Features, read_features, write_features
from osc_rnnt.io.model_file import read_model, write_model
from osc_rnnt.io.result_log import ResultRecord, append_results, read_results
from osc_rnnt.io.synth import synth_features
from osc_rnnt.io.transcripts import read_transcripts, write_transcripts

__all__ = [
    "Features",
    "ResultRecord",
    "append_results",
    "read_features",
    "read_model",
    "read_results",
    "read_transcripts",
    "synth_features",
    "write_features",
    "write_model",
    "write_transcripts",
]
