from fastapi import APIRouter

from normdescent.schemas.api import MatrixRequest
from normdescent.schemas.reports import NormTable
from normdescent.services.norm_table import norm_table

router = APIRouter()


@router.post("/table", response_model=NormTable)
async def get_norm_table(request: MatrixRequest):
    """Every implemented norm and dual of the matrix, plus the reference table"""
    return norm_table(request.matrix)
