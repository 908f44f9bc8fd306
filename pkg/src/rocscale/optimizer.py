"""Full-batch (sub)gradient descent with constant or ADAMAX steps."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import NonFiniteError
from .objective import PairwiseHinge
from .pairs import PairBatch


class StepRule(enum.Enum):
    CONSTANT = "constant"
    ADAMAX = "adamax"


@dataclass(frozen=True)
class OptimizerConfig:
    rule: StepRule = StepRule.ADAMAX
    eta: Optional[float] = None  # None: 0.002 for ADAMAX, 0.01 for constant
    beta1: float = 0.9
    beta2: float = 0.999
    max_epochs: int = 1000
    tol: float = 1e-6
    eps: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "rule", StepRule(self.rule))
        if self.eta is None:
            object.__setattr__(self, "eta", 0.002 if self.rule is StepRule.ADAMAX else 1e-2)
        if not self.eta > 0 or not self.tol > 0:
            raise ValueError("eta and tol must be positive")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ValueError("beta1 and beta2 must lie in [0, 1)")
        if self.max_epochs < 0:
            raise ValueError("max_epochs must be non-negative")


@dataclass
class OptimizerState:
    m: np.ndarray
    u: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, q: int) -> "OptimizerState":
        return cls(np.zeros(q), np.zeros(q), 0)


def step(beta, grad, state: OptimizerState, config: OptimizerConfig):
    """One update; returns ``(new_beta, new_state)`` without mutating inputs."""
    beta = np.asarray(beta, dtype=float)
    grad = np.asarray(grad, dtype=float)
    if grad.shape != beta.shape:
        raise ValueError(f"gradient shape {grad.shape} does not match beta {beta.shape}")
    if config.rule is StepRule.CONSTANT:
        new_beta = beta - config.eta * grad
        new_state = OptimizerState(state.m, state.u, state.t + 1)
    else:
        t = state.t + 1
        m = config.beta1 * state.m + (1.0 - config.beta1) * grad
        u = np.maximum(config.beta2 * state.u, np.abs(grad))
        new_beta = beta - (config.eta / (1.0 - config.beta1**t)) * m / (u + config.eps)
        new_state = OptimizerState(m, u, t)
    if not np.all(np.isfinite(new_beta)):
        raise NonFiniteError(f"non-finite parameters after step {new_state.t}")
    return new_beta, new_state


@dataclass
class TrainTrace:
    objective: list = field(default_factory=list)
    grad_norm: list = field(default_factory=list)
    epochs_run: int = 0
    stop_reason: str = ""
    best_epoch: int = 0

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps({"epoch": k, "objective": o, "grad_norm": g}) + "\n"
            for k, (o, g) in enumerate(zip(self.objective, self.grad_norm))
        )


def minimize(features, batch: PairBatch, obj_config, opt_config: OptimizerConfig = OptimizerConfig(),
             init=None):
    """Run descent on the regularised hinge objective of ``batch``.

    Stops once the largest coordinate change is at most ``tol`` or after
    ``max_epochs`` steps. Returns the iterate with the lowest objective seen and
    a trace whose entry ``k`` describes iterate ``k`` (entry 0 is ``init``).
    """
    problem = PairwiseHinge(features, batch, obj_config.lam)
    beta = np.zeros(problem.q) if init is None else np.array(init, dtype=float)
    if not np.all(np.isfinite(beta)):
        raise NonFiniteError("initial parameters are not finite")
    state = OptimizerState.zeros(problem.q)
    trace = TrainTrace()
    best_val, best_beta = np.inf, beta
    value, grad = problem.value_and_grad(beta)
    trace.stop_reason = "max_epochs"
    for epoch in range(opt_config.max_epochs):
        trace.objective.append(value)
        trace.grad_norm.append(float(np.linalg.norm(grad)))
        if value < best_val:
            best_val, best_beta, trace.best_epoch = value, beta, epoch
        new_beta, state = step(beta, grad, state, opt_config)
        change = float(np.max(np.abs(new_beta - beta))) if beta.size else 0.0
        beta = new_beta
        trace.epochs_run = epoch + 1
        value, grad = problem.value_and_grad(beta)
        if not np.isfinite(value):
            raise NonFiniteError(f"objective became non-finite at epoch {epoch + 1}")
        if change <= opt_config.tol:
            trace.stop_reason = "tol"
            break
    trace.objective.append(value)
    trace.grad_norm.append(float(np.linalg.norm(grad)))
    if value < best_val:
        best_val, best_beta, trace.best_epoch = value, beta, trace.epochs_run
    return best_beta, trace
