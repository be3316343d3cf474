"""
Base experiment interface.

An experiment validates a JSON-like config document, runs to completion with
status updates, and returns a tabular result plus summary metrics.
"""
import asyncio
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Type

import pandas as pd
from pydantic import BaseModel, ValidationError

from ..core.exceptions import ConfigurationError, ExperimentError, SimulationToolkitError
from ..core.progress import StatusReporter


@dataclass
class ExperimentResult:
    name: str
    config: Dict[str, Any]
    table: pd.DataFrame
    summary: Dict[str, Any] = field(default_factory=dict)
    extra_tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    artifacts: Dict[str, Any] = field(default_factory=dict)


class Experiment(StatusReporter, ABC):
    """Base class for all experiments"""

    name: str = ""
    description: str = ""
    config_model: Type[BaseModel]

    def parse_config(self, document: Optional[Dict[str, Any]] = None) -> BaseModel:
        """
        Validate a config document against this experiment's model

        Args:
            document: Config values; missing keys take their defaults

        Returns:
            The validated config model
        """
        try:
            return self.config_model.model_validate(document or {})
        except ValidationError as e:
            raise ConfigurationError(f"Invalid {self.name} config: {str(e)}") from e

    def default_config(self) -> Dict[str, Any]:
        return self.config_model().model_dump(mode="json")

    @abstractmethod
    def run(self, config: BaseModel) -> ExperimentResult:
        """Run the experiment on a validated config"""
        pass

    def run_document(self, document: Optional[Dict[str, Any]] = None) -> ExperimentResult:
        """Validate and run, reporting failures through the status callback"""
        try:
            config = self.parse_config(document)
            self.update_status("Starting", 0.0)
            result = self.run(config)
            self.update_status("Complete", 1.0)
            return result
        except SimulationToolkitError as e:
            self.update_status(f"Error: {str(e)}", 1.0)
            if isinstance(e, ExperimentError):
                raise
            raise ExperimentError(str(e), self.name) from e

    async def execute(self, document: Optional[Dict[str, Any]] = None) -> ExperimentResult:
        """Run in a worker thread so several experiments can proceed concurrently"""
        return await asyncio.to_thread(self.run_document, document)
