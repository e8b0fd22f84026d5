import time
from contextlib import asynccontextmanager

import structlog
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from normdescent.api.v1 import api_router
from normdescent.core.config import settings
from normdescent.core.exceptions import NormDescentError
from normdescent.core.logging import configure_logging
from normdescent.services.verification import SUITES

configure_logging()
logger = structlog.get_logger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan manager"""
    logger.info("api_starting", version=settings.APP_VERSION, environment=settings.ENVIRONMENT)
    logger.info("api_ready", docs=f"{settings.API_V1_STR}/docs")
    yield
    logger.info("api_stopping")


app = FastAPI(
    title=settings.APP_NAME,
    description="Steepest descent under layer-wise norms: solvers, norm tables and property suites",
    version=settings.APP_VERSION,
    lifespan=lifespan,
    docs_url=f"{settings.API_V1_STR}/docs",
    redoc_url=f"{settings.API_V1_STR}/redoc",
    openapi_url=f"{settings.API_V1_STR}/openapi.json",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.BACKEND_CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Request timing middleware
@app.middleware("http")
async def add_process_time_header(request: Request, call_next):
    start_time = time.time()
    response = await call_next(request)
    response.headers["X-Process-Time"] = str(time.time() - start_time)
    return response


@app.get("/")
async def root():
    return {
        "message": f"{settings.APP_NAME} API",
        "status": "operational",
        "version": settings.APP_VERSION,
        "docs": f"{settings.API_V1_STR}/docs",
        "api_v1": settings.API_V1_STR,
        "environment": settings.ENVIRONMENT,
    }


@app.get(f"{settings.API_V1_STR}/health")
async def health_check():
    return {
        "status": "healthy",
        "version": settings.APP_VERSION,
        "timestamp": time.time(),
        "environment": settings.ENVIRONMENT,
        "suites": list(SUITES),
    }


app.include_router(api_router, prefix=settings.API_V1_STR)


@app.exception_handler(NormDescentError)
async def normdescent_error_handler(request: Request, exc: NormDescentError):
    if exc.status_code >= 500:
        logger.error("request_failed", path=str(request.url.path), error=exc.message)
    return JSONResponse(
        status_code=exc.status_code,
        content={"error": type(exc).__name__, "message": exc.message, "path": str(request.url.path)},
    )


@app.exception_handler(404)
async def not_found_handler(request: Request, exc):
    detail = getattr(exc, "detail", None)
    return JSONResponse(
        status_code=404,
        content={
            "error": "Not Found",
            "message": detail if detail and detail != "Not Found" else "The requested endpoint does not exist",
            "path": str(request.url.path),
        },
    )


@app.exception_handler(500)
async def internal_error_handler(request: Request, exc):
    logger.error("internal_server_error", path=str(request.url.path), error=str(exc))
    return JSONResponse(
        status_code=500,
        content={
            "error": "Internal Server Error",
            "message": "An unexpected error occurred",
            "path": str(request.url.path),
        },
    )


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "normdescent.main:app",
        host="0.0.0.0",
        port=8001,
        reload=settings.DEBUG,
        log_level=settings.LOG_LEVEL.lower(),
    )
