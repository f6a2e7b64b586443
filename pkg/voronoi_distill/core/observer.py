from datetime import datetime
from typing import Dict

from voronoi_distill.utils.utils import setup_logger


class DistillObserver:
    """
    Observer for distillation and evaluation runs: logs progress messages,
    collects run metrics and reports every split and merge.
    """

    def __init__(self, log_filename: str = None):
        self.logger = setup_logger(log_filename, "voronoi_distill.observer")
        self.metrics = {
            "start_time": None,
            "end_time": None,
            "epochs": 0,
            "splits": 0,
            "merges": 0,
            "cells": 0,
            "errors": [],
        }

    def update(self, message: str, step_type: str = "info", record=None):
        """
        Receives updates from a pipeline.

        Args:
            message (str): Human-readable progress message
            step_type (str): 'start', 'epoch', 'load', 'complete', 'info' or 'error'
            record: EpochRecord for 'epoch' updates
        """
        if step_type == "start":
            self.metrics["start_time"] = datetime.now()
        elif step_type == "complete":
            self.metrics["end_time"] = datetime.now()
        elif step_type == "epoch" and record is not None:
            self._record_epoch(record)

        if step_type == "error":
            self.metrics["errors"].append(message)
            self.logger.error(message)
        elif step_type == "epoch":
            self.logger.debug(message)
        else:
            self.logger.info(message)

    def _record_epoch(self, record):
        self.metrics["epochs"] += 1
        self.metrics["splits"] += len(record.splits)
        self.metrics["merges"] += len(record.merges)
        self.metrics["cells"] = record.n_cells
        for event in record.splits:
            self.logger.info(
                f"epoch {event.epoch}: split cell {event.cell} -> {event.new_cell} "
                f"(loss {event.mean_loss:.3g}, distance {event.distance:.3g})"
            )
        for event in record.merges:
            self.logger.info(
                f"epoch {event.epoch}: merged cell {event.removed} into {event.kept} "
                f"(parameter distance {event.distance:.3g})"
            )

    def get_metrics(self) -> Dict:
        if self.metrics["start_time"] and self.metrics["end_time"]:
            duration = self.metrics["end_time"] - self.metrics["start_time"]
            self.metrics["duration"] = str(duration)
        return self.metrics
