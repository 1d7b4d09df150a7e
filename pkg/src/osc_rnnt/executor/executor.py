import asyncio
import functools
from typing import Any, Callable, List, Sequence, TypeVar

from pydantic import BaseModel, ConfigDict

from osc_rnnt.logging.logger import get_logger

logger = get_logger(__name__)

# Type variable for the return type of tasks
R = TypeVar("R")


class ExecutorConfig(BaseModel):
    """Configuration for executors."""

    max_concurrent_activities: int | None = None
    """Upper bound on tasks running at once (None means unbounded)"""

    model_config = ConfigDict(extra="allow", arbitrary_types_allowed=True)


class AsyncioExecutor:
    """
    Runs synchronous work items in worker threads from an asyncio program.

    Decoding is CPU-bound numpy code, so every task goes to a thread via
    asyncio.to_thread; a semaphore keeps at most max_concurrent_activities in flight.
    """

    def __init__(self, config: ExecutorConfig | None = None) -> None:
        self.execution_engine = "asyncio"
        self.config = config or ExecutorConfig()
        self._activity_semaphore: asyncio.Semaphore | None = None

    def _semaphore(self) -> asyncio.Semaphore | None:
        # Created lazily so it binds to the loop that actually runs the tasks
        if self._activity_semaphore is None and self.config.max_concurrent_activities:
            self._activity_semaphore = asyncio.Semaphore(self.config.max_concurrent_activities)
        return self._activity_semaphore

    async def _execute_task(self, task: Callable[..., R], **kwargs: Any) -> R | BaseException:
        async def run_task() -> R | BaseException:
            try:
                if asyncio.iscoroutinefunction(task):
                    return await task(**kwargs)
                wrapped = functools.partial(task, **kwargs) if kwargs else task
                return await asyncio.to_thread(wrapped)
            except Exception as e:
                logger.debug(f"Task failed: {e!r}", name="executor.task_failed")
                return e

        semaphore = self._semaphore()
        if semaphore:
            async with semaphore:
                return await run_task()
        return await run_task()

    async def execute(self, *tasks: Callable[..., R], **kwargs: Any) -> List[R | BaseException]:
        """Execute callables concurrently; results come back in argument order."""
        return await asyncio.gather(
            *(self._execute_task(task, **kwargs) for task in tasks),
        )

    async def map(
        self,
        func: Callable[..., R],
        inputs: Sequence[Any],
        **kwargs: Any,
    ) -> List[R | BaseException]:
        """
        Run `func(item)` for each item in `inputs` with the concurrency limit.
        Results are returned in input order; a failed item yields its exception in place.
        """
        return await self.execute(*(functools.partial(func, item) for item in inputs), **kwargs)
