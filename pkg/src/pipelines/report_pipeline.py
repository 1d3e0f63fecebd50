import logging
import time
from dataclasses import dataclass
from typing import List, Optional

import sympy as sp
from pydantic import ValidationError

from ..lattice.families import GroupSpec, SpecError
from ..models import (
    GroupInfo,
    Mismatch,
    OracleReport,
    QPayload,
    RunConfig,
    RunReport,
)
from ..molien.quotient import QResult, compute_Q
from ..oracle.brute_force import OracleComparison, compare_series, oracle_series
from ..polyring.multipoly import format_coefficient
from ..polyring.series import truncate
from ..utils.limits import CapacityError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CAPACITY = 2
EXIT_CONSISTENCY = 3


class ConsistencyError(RuntimeError):
    """Raised when a computed invariant contradicts an identity it must satisfy."""


@dataclass
class RunOutcome:
    status: int
    report: Optional[RunReport] = None
    error: Optional[str] = None

    @property
    def success(self) -> bool:
        return self.status == EXIT_OK


def _group_info(spec: GroupSpec, degrees) -> GroupInfo:
    return GroupInfo(
        family=spec.family.value,
        label=spec.label,
        N=spec.N,
        n=spec.n,
        orderH=spec.order_H,
        orderG=spec.order,
        degrees=list(degrees) if degrees is not None else None,
    )


def build_report(result: QResult, comparison: Optional[OracleComparison] = None,
                 depth: Optional[int] = None) -> RunReport:
    oracle = OracleReport()
    if comparison is not None:
        oracle = OracleReport(
            checked=True,
            depth=depth,
            agrees=comparison.agrees,
            mismatches=[
                Mismatch(exponents=list(e), engine=format_coefficient(a), oracle=format_coefficient(b))
                for e, a, b in comparison.mismatches
            ],
        )
    return RunReport(
        group=_group_info(result.group, result.degrees),
        k=result.k,
        Q=QPayload.from_series(result.Q, result.residual),
        rank=result.rank,
        expected_rank=result.expected_rank,
        separable=result.is_separable,
        scaled_limit=format_coefficient(result.scaled_limit),
        limit_rank=format_coefficient(result.limit_rank),
        oracle=oracle,
    )


def consistency_problems(result: QResult, comparison: Optional[OracleComparison] = None) -> List[str]:
    """Identities every run must satisfy; a non-polynomial Q is not one of them."""
    spec = result.group
    problems = []
    if result.is_polynomial and result.rank != result.expected_rank:
        problems.append(f"rank {result.rank} != |G|^{result.k - 1} = {result.expected_rank}")
    if result.scaled_limit != sp.Rational(1, spec.order):
        problems.append(f"scaled limit {result.scaled_limit} != 1/{spec.order}")
    if result.limit_rank != result.expected_rank:
        problems.append(f"limit rank {result.limit_rank} != {result.expected_rank}")
    if comparison is not None and not comparison.agrees:
        problems.append(f"oracle disagrees on {len(comparison.mismatches)} shown monomial(s)")
    return problems


def _compute(config: RunConfig):
    start_time = time.time()
    last_step_time = start_time

    try:
        spec = config.build_spec()
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    logger.info("[%.2fs] Group built: %s", time.time() - start_time, spec.describe())
    last_step_time = time.time()

    result = compute_Q(spec, config.k, cap=config.cap)
    logger.info("   -> Q_%d complete in %.2fs", config.k, time.time() - last_step_time)
    last_step_time = time.time()

    comparison = None
    if config.check_oracle:
        engine = truncate(result.R_k, config.depth)
        oracle = oracle_series(spec, config.k, config.depth, cap=config.oracle_cap)
        comparison = compare_series(engine, oracle)
        logger.info("   -> Oracle check to depth %d complete in %.2fs", config.depth, time.time() - last_step_time)

    return result, comparison


def run(config: RunConfig) -> RunOutcome:
    """Compute, cross-check and report; the status is the CLI exit code."""
    try:
        result, comparison = _compute(config)
    except CapacityError as exc:
        logger.error("Capacity exceeded: %s", exc)
        return RunOutcome(EXIT_CAPACITY, error=str(exc))
    except (SpecError, ValidationError) as exc:
        logger.error("Invalid input: %s", exc)
        return RunOutcome(EXIT_VALIDATION, error=str(exc))
    except Exception as exc:  # noqa: BLE001
        logger.exception("Internal failure")
        return RunOutcome(EXIT_CONSISTENCY, error=f"internal error: {exc}")

    report = build_report(result, comparison, config.depth if comparison is not None else None)
    problems = consistency_problems(result, comparison)
    if problems:
        error = ConsistencyError("; ".join(problems))
        logger.error("Consistency check failed: %s", error)
        return RunOutcome(EXIT_CONSISTENCY, report=report, error=str(error))
    return RunOutcome(EXIT_OK, report=report)


def render_text(report: RunReport) -> str:
    g = report.group
    lines = [
        f"{g.label} ({g.family}): N={g.N} n={g.n} |H|={g.orderH} |G|={g.orderG}",
        f"k = {report.k}",
    ]
    q = report.q_series()
    power = f"|G|^{report.k - 1}"
    if report.Q.polynomial:
        lines.append(f"Q = {q.numerator.format()}")
        if report.rank == report.expected_rank:
            lines.append(f"rank {report.rank} = {power}")
        else:
            lines.append(f"rank {report.rank} != {power} = {report.expected_rank}")
        lines.append(f"separable: {'yes' if report.separable else 'no'}")
    else:
        lines.append("Q is NOT a polynomial")
        residual = report.Q.residual_poly()
        if residual is None:
            lines.append(f"Q = {q.format()}")
        else:
            over = "".join(f"({residual.format([f'h{i + 1}'])})" for i in range(report.k))
            lines.append(f"Q = ({q.format()}) / {over}")
    if g.degrees is not None:
        lines.append("degrees: " + ", ".join(str(d) for d in g.degrees))
    else:
        lines.append("degrees: none (A_1^G is not a polynomial algebra)")
    lines.append(f"scaled limit {report.scaled_limit} (1/|G| = 1/{g.orderG})")
    lines.append(f"limit rank {report.limit_rank} ({power} = {report.expected_rank})")
    oracle = report.oracle
    if oracle.checked:
        verdict = "agrees" if oracle.agrees else "DISAGREES"
        lines.append(f"oracle (depth {oracle.depth}): {verdict}")
        for m in oracle.mismatches:
            lines.append(f"  {tuple(m.exponents)}: engine {m.engine}, oracle {m.oracle}")
    return "\n".join(lines)
