from typing import Optional

from fastapi import APIRouter, HTTPException, Query, status

from normdescent.core.config import get_settings
from normdescent.core.exceptions import InvalidArgumentError
from normdescent.schemas.reports import VerificationReport
from normdescent.services.verification import run_suite

router = APIRouter()


@router.get("/{suite}", response_model=VerificationReport)
async def verify_suite(suite: str, seed: Optional[int] = Query(None, ge=0, description="Root seed")):
    """Run a property suite and return every check with its measured error"""
    try:
        return run_suite(suite, get_settings().DEFAULT_SEED if seed is None else seed)
    except InvalidArgumentError as exc:
        # the only argument is the suite name
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=exc.message)
