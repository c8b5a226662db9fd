from fastapi import APIRouter, Query
from fastapi.concurrency import run_in_threadpool

from app.core.config import DEFAULT_SAMPLES, DEFAULT_SEED
from app.models.responses import WishartDemoResponse
from app.services.workflow_service import cmd_wishart_demo

router = APIRouter(tags=["wishart"])


@router.get("/wishart-demo", response_model=WishartDemoResponse)
async def wishart_demo(seed: int = Query(DEFAULT_SEED, ge=0), samples: int = Query(DEFAULT_SAMPLES, ge=0)):
    return await run_in_threadpool(cmd_wishart_demo, seed=seed, samples=samples)
