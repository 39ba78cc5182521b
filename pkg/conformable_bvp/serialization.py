"""Problem files (JSON), solution grids (CSV) and existence reports (JSON)."""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ProblemFileError
from .expr import parse
from .kernel import KernelParams
from .models import ExistenceReport, GridFunction, ProblemSpec, SolveResult, parse_limit

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 12


class ProblemFile(BaseModel):
    """Schema of a problem file."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    alpha: float
    lambda_: float = Field(alias="lambda")
    eta: float
    f: str
    limits: Optional[Dict[str, Union[float, str]]] = None

    def to_problem(self) -> ProblemSpec:
        """Build the validated ProblemSpec.

        Raises:
            ParameterError: Parameters or limits out of range.
            ExpressionError: The f expression does not parse.
        """
        limits = {name: parse_limit(value) for name, value in (self.limits or {}).items()}
        params = KernelParams(alpha=self.alpha, lambda_=self.lambda_, eta=self.eta)
        return ProblemSpec(params=params, f=parse(self.f), limits=limits)


def _describe(error: ValidationError) -> str:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first["loc"]) or "document"
    return f"field '{location}': {first['msg']}"


def load_problem(path: Union[str, Path]) -> ProblemSpec:
    """Read and validate a problem file.

    Raises:
        ProblemFileError: The file is unreadable, not JSON, or misses/mistypes a field.
        ParameterError: A parameter is out of range.
        ExpressionError: f does not parse.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(f"cannot read problem file {path}: {exc.strerror or exc}") from None
    try:
        document = ProblemFile.model_validate_json(text)
    except ValidationError as exc:
        raise ProblemFileError(f"{path}: {_describe(exc)}") from None
    logger.debug("loaded problem file %s", path)
    return document.to_problem()


def problem_to_dict(problem: ProblemSpec) -> Dict[str, Any]:
    return problem.to_dict()


def write_problem_json(path: Union[str, Path], problem: ProblemSpec) -> None:
    _write_json(path, problem_to_dict(problem))


def write_solution_csv(path: Union[str, Path], solution: Union[GridFunction, SolveResult]) -> None:
    """Write the `t,x` table with LF line endings and 12 significant digits."""
    grid = solution.solution if isinstance(solution, SolveResult) else solution
    try:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["t", "x"])
            for t, x in grid.rows():
                writer.writerow([f"{t:.{SIGNIFICANT_DIGITS}g}", f"{x:.{SIGNIFICANT_DIGITS}g}"])
    except OSError as exc:
        raise ProblemFileError(f"cannot write {path}: {exc.strerror or exc}") from None


def write_report_json(path: Union[str, Path], report: ExistenceReport) -> None:
    _write_json(path, report.to_dict())


def _write_json(path: Union[str, Path], data: Dict[str, Any]) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            json.dump(data, handle, indent=2, sort_keys=True)
            handle.write("\n")
    except OSError as exc:
        raise ProblemFileError(f"cannot write {path}: {exc.strerror or exc}") from None
