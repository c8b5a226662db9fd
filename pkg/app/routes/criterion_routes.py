from fastapi import APIRouter
from fastapi.concurrency import run_in_threadpool

from app.core.config import DEFAULT_SEED, RESTRICTION_TRIALS
from app.models.requests import CheckRequest
from app.models.responses import VerdictResponse
from app.services.workflow_service import cmd_check_mphstar

router = APIRouter(tags=["criterion"])


@router.post("/check-mphstar", response_model=VerdictResponse)
async def check_mphstar(request: CheckRequest, trials: int = RESTRICTION_TRIALS, seed: int = DEFAULT_SEED):
    """Leading-part verdict for a denominator or for the determinant of a representation"""
    Q = request.Q.to_polynomial() if request.Q is not None else None
    rep = request.rep.to_rep() if request.rep is not None else None
    return await run_in_threadpool(cmd_check_mphstar, Q=Q, rep=rep, minimal_declared=request.minimal_declared,
                                   trials=trials, seed=seed)
