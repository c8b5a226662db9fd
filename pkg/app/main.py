import logging

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app.core.config import LOG_LEVEL
from app.core.exceptions import MatrixAnalyticError
from app.models.responses import ErrorResponse
from app.routes import criterion_routes, realize_routes, simulate_routes, wishart_routes

logging.basicConfig(level=LOG_LEVEL)

app = FastAPI(title='Matrix-Analytic Reward Laws')

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(MatrixAnalyticError)
async def matrix_analytic_error_handler(request: Request, exc: MatrixAnalyticError):
    body = ErrorResponse(error=str(exc.detail), error_code=type(exc).__name__, status_code=exc.status_code)
    return JSONResponse(status_code=exc.status_code, content=body.model_dump(by_alias=True))


app.include_router(realize_routes.router)
app.include_router(criterion_routes.router)
app.include_router(simulate_routes.router)
app.include_router(wishart_routes.router)


# Health check endpoint for Railway
@app.get("/health")
async def health_check():
    return {"status": "healthy"}
