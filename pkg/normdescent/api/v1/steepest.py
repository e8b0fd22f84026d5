from fastapi import APIRouter

from normdescent.schemas.api import SteepestRequest, SteepestResponse
from normdescent.schemas.norms import ModularNormSpec
from normdescent.steepest.solvers import solve_modular

router = APIRouter()


@router.post("/solve", response_model=SteepestResponse)
async def solve(request: SteepestRequest):
    """Closed-form steepest descent step under the modular norm of the layers"""
    scales = request.scales or [1.0] * len(request.layers)
    spec = ModularNormSpec.from_lists(scales, request.norms)
    solution = solve_modular(request.layers, spec, request.sharpness)
    return SteepestResponse(
        updates=[u.tolist() for u in solution.updates],
        step_size=solution.step_size,
        dual_values=solution.dual_values,
        objective_value=solution.objective_value,
    )
