import asyncio
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..core.exceptions import BatchError, ExperimentError
from ..core.progress import StatusCallback
from ..experiments.base import ExperimentResult
from ..experiments.registry import ExperimentRegistry, registry

logger = logging.getLogger(__name__)

Job = Tuple[str, Optional[Dict[str, Any]]]


class ExperimentOrchestrator:
    """Runs independent experiments concurrently, each in its own worker thread."""

    def __init__(self, experiments: ExperimentRegistry = registry):
        self.experiments = experiments
        self._status_handlers: Dict[str, StatusCallback] = {}

    def set_status_handler(self, label: str, handler: StatusCallback):
        """Route status updates of the job with this label to ``handler``"""
        self._status_handlers[label] = handler

    def _update_status_display(self, label: str, status: str, progress: float):
        """Update the status display for a job"""
        handler = self._status_handlers.get(label)
        if handler:
            handler(status, progress)
        else:
            logger.info("[%s] %s (%.0f%%)", label, status, 100 * progress)

    @staticmethod
    def job_label(index: int, name: str) -> str:
        return f"{index}:{name}"

    async def run_experiments(self, jobs: Sequence[Job]) -> List[ExperimentResult]:
        """
        Run several experiments at once and return their results in job order.

        Args:
            jobs: (experiment name, config document) pairs

        Returns:
            One ExperimentResult per job

        Raises:
            BatchError: If any job fails; the other jobs still run to completion
                and their results are kept on the error
        """
        labels = [self.job_label(i, name) for i, (name, _) in enumerate(jobs)]
        tasks = [
            asyncio.create_task(self._run_job(label, name, document))
            for label, (name, document) in zip(labels, jobs)
        ]
        outcomes = await asyncio.gather(*tasks, return_exceptions=True)

        results: List[Optional[ExperimentResult]] = []
        failures: Dict[str, Exception] = {}
        for label, outcome in zip(labels, outcomes):
            if isinstance(outcome, Exception):
                logger.error("Job %s failed: %s", label, outcome)
                failures[label] = outcome
                results.append(None)
            else:
                results.append(outcome)
        if failures:
            raise BatchError(results, failures)
        return results

    async def _run_job(self, label: str, name: str, document: Optional[Dict[str, Any]]) -> ExperimentResult:
        """Run one experiment with status updates"""
        try:
            experiment = self.experiments.create(name)
        except KeyError:
            raise ExperimentError("unknown experiment", name)
        experiment.set_status_callback(
            lambda status, progress: self._update_status_display(label, status, progress)
        )
        try:
            return await experiment.execute(document)
        except ExperimentError:
            raise
        except Exception as e:
            self._update_status_display(label, f"Error: {str(e)}", 1.0)
            raise ExperimentError(f"Run failed: {str(e)}", name) from e

    def run(self, jobs: Sequence[Job]) -> List[ExperimentResult]:
        """Blocking wrapper around run_experiments"""
        return asyncio.run(self.run_experiments(jobs))
