"""
A central context object holding the state shared by one osc-rnnt run.
"""

from typing import Optional, Union

from opentelemetry import trace
from opentelemetry.exporter.otlp.proto.http.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor, ConsoleSpanExporter
from pydantic import BaseModel, ConfigDict

from osc_rnnt.config import Settings, get_settings
from osc_rnnt.executor.executor import AsyncioExecutor, ExecutorConfig
from osc_rnnt.logging.events import EventFilter
from osc_rnnt.logging.logger import LoggingConfig, get_logger
from osc_rnnt.logging.transport import create_transport

logger = get_logger(__name__)


class Context(BaseModel):
    """
    Context passed around one application run: settings, executor and tracer.
    """

    config: Optional[Settings] = None
    executor: Optional[AsyncioExecutor] = None
    tracer: Optional[trace.Tracer] = None

    model_config = ConfigDict(
        extra="allow",
        arbitrary_types_allowed=True,
    )


async def configure_otel(config: Settings) -> None:
    """
    Configure OpenTelemetry based on the application config.
    """
    if not config.otel.enabled:
        return

    # Avoid re-initialization
    if trace.get_tracer_provider().__class__.__name__ not in (
        "NoOpTracerProvider",
        "ProxyTracerProvider",
    ):
        return

    resource = Resource.create(
        attributes={
            key: value
            for key, value in {
                "service.name": config.otel.service_name,
                "service.version": config.otel.service_version,
            }.items()
            if value is not None
        }
    )
    tracer_provider = TracerProvider(resource=resource)

    if config.otel.otlp_endpoint:
        exporter = OTLPSpanExporter(endpoint=config.otel.otlp_endpoint)
        tracer_provider.add_span_processor(BatchSpanProcessor(exporter))
        if config.otel.console_debug:
            tracer_provider.add_span_processor(BatchSpanProcessor(ConsoleSpanExporter()))
    else:
        tracer_provider.add_span_processor(BatchSpanProcessor(ConsoleSpanExporter()))

    trace.set_tracer_provider(tracer_provider)


async def configure_logger(config: Settings, progress_display: bool | None = None) -> None:
    """
    Configure logging based on the application config.
    """
    event_filter = EventFilter(min_level=config.logger.level)
    transport = create_transport(settings=config.logger, event_filter=event_filter)
    await LoggingConfig.configure(
        event_filter=event_filter,
        transport=transport,
        progress_display=config.logger.progress_display
        if progress_display is None
        else progress_display,
    )
    logger.debug(f"Configured logger with level: {config.logger.level}")


def configure_executor(config: Settings) -> AsyncioExecutor:
    return AsyncioExecutor(ExecutorConfig(max_concurrent_activities=max(1, config.workers)))


async def initialize_context(
    config: Optional[Union[Settings, str]] = None,
    progress_display: bool | None = None,
) -> Context:
    """
    Initialize the application context.
    """
    if config is None:
        config = get_settings()
    elif isinstance(config, str):
        config = get_settings(config_path=config)

    context = Context(config=config)

    await configure_otel(config)
    await configure_logger(config, progress_display=progress_display)

    context.executor = configure_executor(config)
    context.tracer = trace.get_tracer(config.otel.service_name)
    return context


async def cleanup_context() -> None:
    """
    Shut the logging bus down.
    """
    await LoggingConfig.shutdown()
