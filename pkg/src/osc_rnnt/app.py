import asyncio
import uuid
from contextlib import asynccontextmanager
from typing import Optional

from osc_rnnt.config import Settings
from osc_rnnt.context import Context, cleanup_context, initialize_context
from osc_rnnt.event_progress import ProgressAction
from osc_rnnt.logging.logger import Logger, get_logger


class DecoderApp:
    """
    Application object every command body runs in. Owns the context (settings,
    executor, tracer) and the logging lifecycle.

    Example usage:
        app = DecoderApp("decode", settings=settings)

        async with app.run() as running_app:
            outputs = await running_app.executor.map(decode_one, utterances)
    """

    def __init__(
        self,
        name: str = "osc-rnnt",
        settings: Optional[Settings] | str = None,
        progress_display: bool | None = None,
    ) -> None:
        """
        Args:
            name: Name of the run, shown as the progress target
            settings: Settings object, or a path to a YAML file. If unspecified the
                settings are discovered from osc-rnnt.config.yaml.
            progress_display: Override the configured progress display switch
        """
        self.name = name
        self.run_id = uuid.uuid4().hex[:12]

        self._config_or_path = settings
        self._progress_display = progress_display
        self._logger: Logger | None = None
        self._context: Optional[Context] = None
        self._initialized = False

    @property
    def context(self) -> Context:
        if self._context is None:
            raise RuntimeError(
                "DecoderApp not initialized, please call initialize() first, or use async with app.run()."
            )
        return self._context

    @property
    def config(self) -> Settings:
        return self.context.config

    @property
    def executor(self):
        return self.context.executor

    @property
    def logger(self) -> Logger:
        if self._logger is None:
            self._logger = get_logger(f"osc_rnnt.{self.name}")
        return self._logger

    async def initialize(self) -> None:
        """Initialize the application."""
        if self._initialized:
            return

        self._context = await initialize_context(
            self._config_or_path, progress_display=self._progress_display
        )
        self._initialized = True
        self.logger.info(
            f"{self.name} initialized",
            data={
                "progress_action": ProgressAction.LOADING,
                "target": self.name,
                "task_name": self.name,
                "run_id": self.run_id,
            },
        )

    async def cleanup(self) -> None:
        """Cleanup application resources."""
        if not self._initialized:
            return

        # Update progress display before logging is shut down
        self.logger.info(
            f"{self.name} finished",
            data={
                "progress_action": ProgressAction.FINISHED,
                "target": self.name,
                "task_name": self.name,
                "run_id": self.run_id,
            },
        )
        try:
            # Let the bus pick up the final event
            await asyncio.sleep(0)
            await cleanup_context()
        except asyncio.CancelledError:
            self.logger.debug("Cleanup cancelled during shutdown")

        self._context = None
        self._initialized = False

    @asynccontextmanager
    async def run(self):
        """
        Run the application. Use as context manager.

        Example:
            async with app.run() as running_app:
                # App is initialized here
                pass
        """
        await self.initialize()
        try:
            yield self
        finally:
            await self.cleanup()
