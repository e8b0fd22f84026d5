"""Adapters that drive each optimizer from the training loop.

Every adapter owns a pydantic state, so a run checkpoints by dumping
``adapter.state`` and resumes with ``adapter.load_state``.
"""
from abc import ABC, abstractmethod
from typing import ClassVar, Dict, List, NamedTuple, Sequence, Type

import numpy as np
from pydantic import BaseModel, Field

from normdescent.core.exceptions import ConfigError
from normdescent.linalg.matrix import LayerList, Matrix
from normdescent.norms.duality import dual_norm
from normdescent.optimizers.adam import AdamState, adam_step
from normdescent.optimizers.descent import sign_descent_step, spectral_descent_step, steepest_step
from normdescent.optimizers.line_search import LineSearchState, line_search_update
from normdescent.optimizers.prodigy import ProdigyState, prodigy_step
from normdescent.optimizers.shampoo import ShampooState, shampoo_step
from normdescent.schemas.experiment import OptimizerConfig
from normdescent.schemas.norms import ModularNormSpec, NormSpec
from normdescent.schemas.optimizers import OptimizerName, UpdateOrder

SIGN_DUAL = NormSpec.l1_to_linf()  # dual is the entrywise l1 norm
SPECTRAL_DUAL = NormSpec.spectral()  # dual is the nuclear norm


class StepOutcome(NamedTuple):
    weights: LayerList
    step_size: float
    dual_values: List[float]


class StepCounter(BaseModel):
    step_count: int = Field(0, ge=0)


def layer_duals(g: Sequence[Matrix], spec: NormSpec) -> List[float]:
    return [dual_norm(gi, spec) for gi in g]


class TrainingOptimizer(ABC):
    name: ClassVar[OptimizerName]
    state_type: ClassVar[Type[BaseModel]] = StepCounter

    def __init__(self, config: OptimizerConfig, params: Sequence[Matrix]):
        self.config = config
        self.state = self.initial_state(list(params))

    def initial_state(self, params: LayerList) -> BaseModel:
        return StepCounter()

    @abstractmethod
    def step(self, w: LayerList, g: LayerList) -> StepOutcome:
        ...

    def dump_state(self) -> dict:
        return self.state.model_dump(mode="json")

    def load_state(self, data: dict) -> None:
        self.state = self.state_type.model_validate(data)

    def _tick(self) -> None:
        if isinstance(self.state, StepCounter):
            self.state.step_count += 1


OPTIMIZERS: Dict[OptimizerName, Type[TrainingOptimizer]] = {}


def register(cls: Type[TrainingOptimizer]) -> Type[TrainingOptimizer]:
    OPTIMIZERS[cls.name] = cls
    return cls


def build_optimizer(config: OptimizerConfig, params: Sequence[Matrix]) -> TrainingOptimizer:
    try:
        cls = OPTIMIZERS[OptimizerName(config.name)]
    except (KeyError, ValueError):
        raise ConfigError(
            f"unknown optimizer {config.name!r}; valid: {sorted(n.value for n in OPTIMIZERS)}"
        )
    return cls(config, params)


@register
class AdamOptimizer(TrainingOptimizer):
    name = OptimizerName.ADAM
    state_type = AdamState

    def initial_state(self, params):
        c = self.config
        return AdamState.zeros(
            params,
            beta1=c.beta1,
            beta2=c.beta2,
            lr=c.lr,
            epsilon=1e-8 if c.epsilon is None else c.epsilon,
            bias_correction=c.bias_correction,
        )

    def step(self, w, g):
        return StepOutcome(adam_step(self.state, w, g), self.state.lr, layer_duals(g, SIGN_DUAL))


@register
class ShampooOptimizer(TrainingOptimizer):
    name = OptimizerName.SHAMPOO
    state_type = ShampooState

    def initial_state(self, params):
        c = self.config
        return ShampooState.zeros(
            params,
            mode=c.shampoo_mode,
            beta=c.shampoo_beta,
            lr=c.lr,
            epsilon=1e-12 if c.epsilon is None else c.epsilon,
        )

    def step(self, w, g):
        return StepOutcome(shampoo_step(self.state, w, g), self.state.lr, layer_duals(g, SPECTRAL_DUAL))


@register
class ProdigyOptimizer(TrainingOptimizer):
    name = OptimizerName.PRODIGY
    state_type = ProdigyState

    def initial_state(self, params):
        c = self.config
        return ProdigyState.start(
            params,
            eta=c.eta0,
            beta1=c.beta1,
            beta2=c.beta2,
            epsilon=1e-8 if c.epsilon is None else c.epsilon,
            update_order=c.update_order,
            scale_epsilon=c.scale_epsilon,
        )

    def step(self, w, g):
        eta = self.state.eta
        new_w = prodigy_step(self.state, w, g)
        if self.state.update_order is UpdateOrder.LOOKAHEAD:
            eta = self.state.eta
        return StepOutcome(new_w, eta, layer_duals(g, SIGN_DUAL))


@register
class SignDescentOptimizer(TrainingOptimizer):
    name = OptimizerName.SIGN_DESCENT

    def step(self, w, g):
        self._tick()
        return StepOutcome(sign_descent_step(w, g, self.config.lr), self.config.lr, layer_duals(g, SIGN_DUAL))


@register
class SpectralDescentOptimizer(TrainingOptimizer):
    name = OptimizerName.SPECTRAL_DESCENT

    def step(self, w, g):
        self._tick()
        c = self.config
        new_w = spectral_descent_step(w, g, c.lr, c.backend, c.polynomial)
        return StepOutcome(new_w, c.lr, layer_duals(g, SPECTRAL_DUAL))


@register
class SteepestOptimizer(TrainingOptimizer):
    """Modular-norm steepest descent; sharpness defaults to d_in / d_out."""

    name = OptimizerName.STEEPEST

    def __init__(self, config, params):
        super().__init__(config, params)
        layers = len(params)
        norms = config.norms or [NormSpec.spectral()] * layers
        scales = config.scales or [1.0] * layers
        if len(norms) != layers or len(scales) != layers:
            raise ConfigError(f"steepest: need {layers} norms and scales, got {len(norms)} and {len(scales)}")
        self.spec = ModularNormSpec.from_lists(scales, norms)
        d_in = params[0].shape[1]
        d_out = params[-1].shape[0]
        self.sharpness = config.sharpness if config.sharpness is not None else d_in / d_out

    def step(self, w, g):
        self._tick()
        new_w, solution = steepest_step(w, g, self.spec, self.sharpness)
        return StepOutcome(new_w, solution.step_size, solution.dual_values)


@register
class LineSearchOptimizer(TrainingOptimizer):
    """l_inf steepest direction (sign) with a warmup step-size rule."""

    name = OptimizerName.LINE_SEARCH
    state_type = LineSearchState

    def initial_state(self, params):
        c = self.config
        return LineSearchState.start(params, c.eta0, policy=c.policy, anchor=c.anchor)

    def step(self, w, g):
        eta = self.state.eta
        new_w = [wi - eta * np.sign(gi) for wi, gi in zip(w, g)]
        line_search_update(self.state, w, g)
        return StepOutcome(new_w, eta, layer_duals(g, SIGN_DUAL))
