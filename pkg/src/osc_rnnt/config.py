"""
Reading settings from the YAML configuration file and providing a settings object
for the application configuration.
"""

from pathlib import Path
from typing import List, Literal, Tuple, Type

from pydantic import BaseModel, ConfigDict, field_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

CONFIG_FILENAMES = ["osc-rnnt.config.yaml", "osc_rnnt.config.yaml"]


class DecoderSettings(BaseModel):
    """
    Default knobs for the beam decoders. Command line flags override these.
    """

    beam: int = 5
    """Beam width W"""

    alpha: int = 1
    """Prefix length-difference cap for the one-step constrained search"""

    expand_beam: float = 2.3
    """Label margin (log domain) of the pruned reference search"""

    state_beam: float = 4.6
    """Early-exit margin (log domain) of the pruned reference search"""

    max_pops_per_frame: int = 100_000
    """Safety cap on expansion-loop iterations per frame of the reference search"""

    oracle_max_len: int | None = None
    """Longest label sequence the exhaustive oracle enumerates (None means 2*T)"""

    oracle_budget: int = 200_000
    """Maximum number of label sequences the exhaustive oracle may enumerate"""

    model_config = ConfigDict(extra="forbid")

    @field_validator("beam", "max_pops_per_frame", "oracle_budget")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be >= 1")
        return v

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: int) -> int:
        if v < 0:
            raise ValueError("alpha must be >= 0")
        return v

    @field_validator("expand_beam", "state_beam")
    @classmethod
    def validate_margin(cls, v: float) -> float:
        if v < 0:
            raise ValueError("margins must be >= 0")
        return v


class BenchSettings(BaseModel):
    """
    Settings for the benchmark grid.
    """

    decoders: List[str] = ["ref", "improved", "osc"]
    beams: List[int] = [5, 10, 20]
    alphas: List[int] = [1, 2]

    repeats: int = 3
    """Timed repetitions per utterance; the best one is kept"""

    warmup: bool = True
    """Run one untimed pass over the corpus before timing"""

    min_timer_ticks: int = 100
    """Warn when an utterance takes fewer timer ticks than this"""

    include_encoder: bool = True
    """Time the encoder together with the search"""

    model_config = ConfigDict(extra="forbid")


class OpenTelemetrySettings(BaseModel):
    """
    OTEL settings for osc-rnnt.
    """

    enabled: bool = False

    service_name: str = "osc-rnnt"
    service_version: str | None = None

    otlp_endpoint: str | None = None
    """OTLP endpoint for OpenTelemetry tracing"""

    console_debug: bool = False
    """Log spans to console"""


class LoggerSettings(BaseModel):
    """
    Logger settings for osc-rnnt.
    """

    type: Literal["none", "console", "file"] = "file"

    level: Literal["debug", "info", "warning", "error"] = "warning"
    """Minimum logging level"""

    progress_display: bool = True
    """Enable or disable the progress display"""

    path: str = "osc-rnnt.jsonl"
    """Path to log file, if logger 'type' is 'file'."""


class Settings(BaseSettings):
    """
    Settings class for osc-rnnt. Values come from the YAML file and explicit keyword
    arguments only; environment variables are not consulted.
    """

    model_config = SettingsConfigDict(
        extra="allow",
        nested_model_default_partial_update=True,
    )

    workers: int = 1
    """Worker threads for batch decoding (benchmarks always run sequentially)"""

    decoder: DecoderSettings = DecoderSettings()
    """Decoder defaults"""

    bench: BenchSettings = BenchSettings()
    """Benchmark grid defaults"""

    logger: LoggerSettings = LoggerSettings()
    """Logger settings"""

    otel: OpenTelemetrySettings = OpenTelemetrySettings()
    """OpenTelemetry tracing settings"""

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)

    @classmethod
    def find_config(cls) -> Path | None:
        """Find the config file in the current directory or parent directories."""
        current_dir = Path.cwd()

        while current_dir != current_dir.parent:
            for filename in CONFIG_FILENAMES:
                config_path = current_dir / filename
                if config_path.exists():
                    return config_path
            current_dir = current_dir.parent

        return None


# Global settings object
_settings: Settings | None = None


def get_settings(config_path: str | Path | None = None) -> Settings:
    """Get settings instance, automatically loading from config file if available."""
    global _settings

    # A specific path always reloads, so each test gets its own config
    if config_path:
        _settings = None
    elif _settings:
        return _settings

    if config_path:
        config_file = Path(config_path)
        if not config_file.is_absolute() and not config_file.exists():
            resolved_path = Path.cwd() / config_file.name
            if resolved_path.exists():
                config_file = resolved_path
    else:
        config_file = Settings.find_config()

    if config_file:
        if not config_file.exists():
            from osc_rnnt.console import error_console

            error_console.print(f"Warning: Specified config file does not exist: {config_file}")
        else:
            import yaml  # pylint: disable=C0415

            with open(config_file, "r", encoding="utf-8") as f:
                yaml_settings = yaml.safe_load(f) or {}
            _settings = Settings(**yaml_settings)
            return _settings

    _settings = Settings()
    return _settings
