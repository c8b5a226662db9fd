from fastapi import APIRouter
from fastapi.concurrency import run_in_threadpool

from app.models.requests import ProjectRequest, SimulateRequest
from app.models.responses import ProjectResponse, SimulateResponse
from app.services.workflow_service import cmd_project, cmd_simulate

router = APIRouter(tags=["simulation"])


@router.post("/project", response_model=ProjectResponse)
async def project_rep(request: ProjectRequest):
    return await run_in_threadpool(cmd_project, request.rep.to_rep(), request.a, u_grid=request.u_grid,
                                   samples=request.samples, seed=request.seed)


@router.post("/simulate", response_model=SimulateResponse)
async def simulate(request: SimulateRequest):
    """Reward-path summary: means, covariance and a transform table"""
    return await run_in_threadpool(cmd_simulate, request.rep.to_rep(), samples=request.samples,
                                   seed=request.seed, grid=request.grid)
