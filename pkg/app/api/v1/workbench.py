"""Workbench endpoints: every route runs one command and returns its report."""

import logging

from fastapi import APIRouter, HTTPException
from fastapi.concurrency import run_in_threadpool

from app.models.enums import ExitCode
from app.models.schemas import CommandReport, CommandRequest
from app.services.commands import execute_command

logger = logging.getLogger(__name__)

router = APIRouter(tags=["workbench"])

HTTP_STATUS = {
    ExitCode.INPUT_ERROR: 422,
    ExitCode.MODEL_ADEQUACY: 409,
    ExitCode.BUDGET_EXHAUSTED: 507,
}


async def _run(request: CommandRequest) -> CommandReport:
    """Run a command off the event loop; module errors become HTTP errors."""
    report = await run_in_threadpool(execute_command, request)
    status = HTTP_STATUS.get(report.exit_code)
    if status is not None:
        logger.warning("%s rejected with %d: %s", request.command, status, report.error)
        raise HTTPException(status_code=status, detail=report.error)
    # verification failures are ordinary results carrying witnesses
    return report


@router.post("/command", response_model=CommandReport, response_model_exclude_none=True)
async def run_command(request: CommandRequest):
    """Run any workbench command named in the body."""
    return await _run(request)


@router.post("/eval", response_model=CommandReport, response_model_exclude_none=True)
async def eval_expectation(request: CommandRequest):
    """Evaluate an expectation at the given states (or all enumerated states)."""
    return await _run(request.model_copy(update={"command": "eval"}))


@router.post("/wp", response_model=CommandReport, response_model_exclude_none=True)
async def weakest_preexpectation(request: CommandRequest):
    """Tabulate a transformer for a program and postexpectation."""
    return await _run(request.model_copy(update={"command": "wp"}))


@router.post("/oracle", response_model=CommandReport, response_model_exclude_none=True)
async def oracle(request: CommandRequest):
    """Min or max expected reward of the program's MDP."""
    return await _run(request.model_copy(update={"command": "oracle"}))


@router.post("/laws", response_model=CommandReport, response_model_exclude_none=True)
async def laws(request: CommandRequest):
    """Run the randomized law suite."""
    return await _run(request.model_copy(update={"command": "laws"}))


@router.post("/casestudy/{name}", response_model=CommandReport, response_model_exclude_none=True)
async def casestudy(name: str, request: CommandRequest):
    """Reproduce a bounded case study."""
    return await _run(request.model_copy(update={"command": "casestudy", "casestudy": name}))
