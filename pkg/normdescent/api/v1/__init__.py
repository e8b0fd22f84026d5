from fastapi import APIRouter
from .norms import router as norms_router
from .steepest import router as steepest_router
from .orthogonalize import router as orthogonalize_router
from .verify import router as verify_router

api_router = APIRouter()

api_router.include_router(norms_router, prefix="/norms", tags=["Norms"])
api_router.include_router(steepest_router, prefix="/steepest", tags=["Steepest descent"])
api_router.include_router(orthogonalize_router, prefix="/orthogonalize", tags=["Orthogonalization"])
api_router.include_router(verify_router, prefix="/verify", tags=["Verification"])
