from fastapi import APIRouter

from normdescent.schemas.api import TraceRequest, TraceResponse
from normdescent.services.tracing import orthogonalize_trace

router = APIRouter()


@router.post("/trace", response_model=TraceResponse)
async def trace(request: TraceRequest):
    rows = orthogonalize_trace(request.matrix, request.polynomial)
    return TraceResponse(rows=rows, final_error=rows[-1].error)
