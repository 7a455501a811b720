"""Base class for all trade-off studies."""

import asyncio
import sys
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Tuple

from circuit import Circuit
from config import MAX_PARALLEL_POINTS
from errors import AtomcError, StudyError
from hardware import HardwareSpec
from pipeline import load_circuit, prepare_circuit


class BaseStudy(ABC):
    """A parameter sweep producing one or more CSV rows per point.

    Subclasses define `name`, `columns`, `default_values()` and `evaluate()`.
    Points are independent; `run` evaluates them concurrently in worker
    threads and returns rows in point order regardless of completion order.
    Studies that need a circuit get it from `circuit_for(seed)`, which either
    regenerates the configured benchmark or returns the fixed input circuit.
    """

    name: str = "study"
    columns: Tuple[str, ...] = ()
    needs_circuit: bool = False
    default_bench: Tuple[str, int] = ("ghz", 16)

    def __init__(
        self,
        spec: HardwareSpec,
        seed: int = 0,
        circuit: Optional[Circuit] = None,
        bench: Optional[Tuple[str, int]] = None,
        lower: bool = True,
        options: Optional[Dict[str, Any]] = None,
        max_parallel: int = MAX_PARALLEL_POINTS,
    ):
        self.spec = spec
        self.seed = seed
        self.circuit = circuit
        self.bench = bench if bench is not None or circuit is not None else self.default_bench
        self.lower = lower
        self.options = dict(options or {})
        self.max_parallel = max(1, max_parallel)

    def circuit_for(self, seed: int) -> Circuit:
        if self.circuit is not None:
            return self.circuit
        kind, n = self.bench
        return prepare_circuit(load_circuit(bench=kind, n=n, seed=seed), self.lower)

    @abstractmethod
    def default_values(self) -> List[Any]:
        """Sweep points used when no --values are given."""

    def check_values(self, values: Sequence[Any]) -> None:
        if not values:
            raise StudyError(f"{self.name}: empty parameter range")

    def setup(self) -> None:
        """Work shared by all points; runs once before the sweep."""

    @abstractmethod
    def evaluate(self, value: Any) -> List[Dict[str, Any]]:
        """Rows for one sweep point."""

    async def run_async(self, values: Sequence[Any]) -> List[Dict[str, Any]]:
        semaphore = asyncio.Semaphore(self.max_parallel)

        async def one(value: Any) -> List[Dict[str, Any]]:
            async with semaphore:
                return await asyncio.to_thread(self.evaluate, value)

        per_point = await asyncio.gather(*(one(v) for v in values))
        return [row for rows in per_point for row in rows]

    def run(self, values: Optional[Sequence[Any]] = None) -> Dict[str, Any]:
        """Evaluate the sweep.

        Returns:
            Dict with status, columns and rows, or status error and message
        """
        try:
            values = list(values) if values is not None else self.default_values()
            self.check_values(values)
            self.setup()
            print(f"🔬 {self.name}: {len(values)} points on {self.spec.name}", file=sys.stderr)
            rows = asyncio.run(self.run_async(values))
        except (AtomcError, ValueError) as exc:
            print(f"❌ {self.name}: {exc}", file=sys.stderr)
            return {"status": "error", "message": str(exc)}
        print(f"✅ {self.name}: {len(rows)} rows", file=sys.stderr)
        return {"status": "success", "study": self.name, "columns": list(self.columns), "rows": rows}
