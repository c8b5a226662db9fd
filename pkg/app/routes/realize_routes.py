from fastapi import APIRouter
from fastapi.concurrency import run_in_threadpool

from app.core.config import DEFAULT_SEED, VERIFY_POINTS
from app.models.responses import RealizeResponse
from app.models.transform_schema import TransformSchema
from app.services.workflow_service import cmd_realize

router = APIRouter(tags=["realization"])


@router.post("/realize", response_model=RealizeResponse)
async def realize(transform: TransformSchema, seed: int = DEFAULT_SEED, points: int = VERIFY_POINTS):
    """Kulkarni representation of a rational transform with its verification report"""
    return await run_in_threadpool(cmd_realize, transform, seed=seed, points=points)
