# -*- coding: utf-8 -*-
# ==============================================================================
# MIT License
#
# Copyright (c) 2026 Attribution Audit developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
# ==============================================================================

"""
    Layer-wise Relevance Propagation
    ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

    Relevance flows from seeded nodes down to the input, one rule per layer:

        weighted layers:  LRP-0, LRP-eps, LRP-gamma, LRP-beta, adaptive beta, zB
        average pooling:  proportional (LRP-0) or squared activations
        max pooling:      winner takes all
        residual add:     split in proportion to each branch's signal
        ReLU / flatten:   pass through

    Bias relevance is absorbed. Denominators below 1e-12 drop the relevance
    of that neuron, which is counted as absorbed in the report.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..common.errors import ConfigError, GraphError, SelectorError, ShapeError
from ..tensor import LayerKind, ModelGraph, Node, INPUT, slot_name
from ..tensor import forward_batch
from ..tensor.ops import im2col, col2im, to_rows, pool_windows, unpool_windows, channel_view

from .beta import BetaVariant, DEFAULT_CAP, adaptive_beta_array
from .maps import AttributionMap, logit_target, sum_target


TINY = 1e-12


class Rule:

    LRP_0 = 'lrp-0'
    EPSILON = 'epsilon'
    GAMMA = 'gamma'
    BETA = 'beta'
    ADAPTIVE_BETA = 'adaptive-beta'
    ZB = 'zb'

    POOL_PROPORTIONAL = 'pool-proportional'
    POOL_SQUARED = 'pool-squared'

    WEIGHTED = (LRP_0, EPSILON, GAMMA, BETA, ADAPTIVE_BETA, ZB)
    POOLING = (POOL_PROPORTIONAL, POOL_SQUARED)


@dataclass(frozen=True)
class RuleSpec:

    rule: str
    eps: float = 0.0
    gamma: float = 0.0
    beta: float = 0.0
    cap: float = DEFAULT_CAP
    low: float = 0.0
    high: float = 1.0
    variant: str = BetaVariant.DISPLAYED

    def __post_init__(self):
        if self.rule not in Rule.WEIGHTED and self.rule not in Rule.POOLING:
            raise ConfigError('unknown LRP rule: %s' % self.rule)
        if self.eps < 0 or self.gamma < 0 or self.beta < 0 or self.cap < 0:
            raise ConfigError('eps, gamma, beta and cap must be >= 0: %s' % (self, ))
        if self.low > self.high:
            raise ConfigError('zB bounds need low <= high: %s' % (self, ))
        if self.variant not in BetaVariant.ALL:
            raise ConfigError('unknown beta variant: %s' % self.variant)

    @classmethod
    def lrp_0(cls):
        return cls(rule=Rule.LRP_0)

    @classmethod
    def epsilon(cls, eps: float):
        return cls(rule=Rule.EPSILON, eps=eps)

    @classmethod
    def gamma_rule(cls, gamma: float, eps: float = 0.0):
        return cls(rule=Rule.GAMMA, gamma=gamma, eps=eps)

    @classmethod
    def beta_rule(cls, beta: float):
        return cls(rule=Rule.BETA, beta=beta)

    @classmethod
    def adaptive(cls, cap: float = DEFAULT_CAP, variant: str = BetaVariant.DISPLAYED):
        return cls(rule=Rule.ADAPTIVE_BETA, cap=cap, variant=variant)

    @classmethod
    def zb(cls, low: float = 0.0, high: float = 1.0):
        return cls(rule=Rule.ZB, low=low, high=high)

    @classmethod
    def pool_proportional(cls):
        return cls(rule=Rule.POOL_PROPORTIONAL)

    @classmethod
    def pool_squared(cls):
        return cls(rule=Rule.POOL_SQUARED)


@dataclass(frozen=True)
class LrpConfig:
    """
        dense / conv:  rule for Dense / Conv2D layers
        pool:          rule for average pooling (max pooling is always winner-takes-all)
        first:         rule for the lowest weighted layer (e.g. zB), if any
        gamma_decay:   (gamma_bottom, gamma_top): conv layers get LRP-gamma with
                       gamma interpolated geometrically across conv depth
        residual_eps:  stabilizer of the residual split denominator
        overrides:     (node, rule) pairs applied last
    """

    dense: RuleSpec = field(default_factory=RuleSpec.lrp_0)
    conv: RuleSpec = field(default_factory=RuleSpec.lrp_0)
    pool: RuleSpec = field(default_factory=RuleSpec.pool_proportional)
    first: Optional[RuleSpec] = None
    gamma_decay: Optional[Tuple[float, float]] = None
    residual_eps: float = 1e-9
    overrides: Tuple[Tuple[str, RuleSpec], ...] = ()

    def __post_init__(self):
        for name in ('dense', 'conv'):
            spec = getattr(self, name)
            if spec.rule not in Rule.WEIGHTED:
                raise ConfigError('%s layers need a weighted-layer rule, got %s' % (name, spec.rule))
        if self.pool.rule not in Rule.POOLING:
            raise ConfigError('pooling needs a pooling rule, got %s' % self.pool.rule)
        if self.first is not None and self.first.rule not in Rule.WEIGHTED:
            raise ConfigError('first layer needs a weighted-layer rule, got %s' % self.first.rule)
        if self.gamma_decay is not None:
            bottom, top = self.gamma_decay
            if bottom < 0 or top < 0:
                raise ConfigError('gamma decay endpoints must be >= 0: %s' % (self.gamma_decay, ))
        if self.residual_eps < 0:
            raise ConfigError('residual_eps must be >= 0: %s' % self.residual_eps)

    def rules_for(self, model: ModelGraph) -> Dict[str, RuleSpec]:
        """ rule of every weighted / pooling node """
        rules = {}
        convs = model.nodes_of_kind(LayerKind.CONV2D)
        for node in model.nodes_of_kind(LayerKind.DENSE):
            rules[node.name] = self.dense
        for index, node in enumerate(convs):
            spec = self.conv
            if self.gamma_decay is not None:
                spec = RuleSpec.gamma_rule(gamma=gamma_schedule(self.gamma_decay, index, len(convs)),
                                           eps=self.conv.eps)
            rules[node.name] = spec
        for node in model.nodes_of_kind(LayerKind.AVG_POOL):
            rules[node.name] = self.pool
        weighted = model.nodes_of_kind(LayerKind.DENSE, LayerKind.CONV2D)
        if self.first is not None and len(weighted) > 0:
            rules[weighted[0].name] = self.first
        for name, spec in self.overrides:
            if not model.has_node(name):
                raise ConfigError('rule override for unknown node: %s' % name)
            rules[name] = spec
        return rules


def gamma_schedule(decay: Tuple[float, float], index: int, count: int) -> float:
    """ geometric interpolation from gamma_bottom (index 0) to gamma_top (index count - 1) """
    bottom, top = decay
    if count <= 1:
        return bottom
    if bottom == 0 or top == 0:
        # no geometric path through zero: fall back to linear
        return bottom + (top - bottom) * index / (count - 1)
    return bottom * (top / bottom) ** (index / (count - 1))


#
#   Presets
#

def preset_lrp_0() -> LrpConfig:
    return LrpConfig()


def preset_epsilon(eps: float) -> LrpConfig:
    return LrpConfig(dense=RuleSpec.epsilon(eps), conv=RuleSpec.epsilon(eps))


def preset_beta(beta: float) -> LrpConfig:
    return LrpConfig(dense=RuleSpec.beta_rule(beta), conv=RuleSpec.beta_rule(beta))


def preset_adaptive(cap: float = DEFAULT_CAP, variant: str = BetaVariant.DISPLAYED) -> LrpConfig:
    spec = RuleSpec.adaptive(cap=cap, variant=variant)
    return LrpConfig(dense=spec, conv=spec)


def preset_composite(low: float = 0.0, high: float = 1.0,
                     decay: Tuple[float, float] = (1.0, 0.01)) -> LrpConfig:
    """ zB first layer, squared pooling, decaying LRP-gamma on convs, LRP-0 dense """
    return LrpConfig(dense=RuleSpec.lrp_0(), conv=RuleSpec.gamma_rule(decay[0]), pool=RuleSpec.pool_squared(),
                     first=RuleSpec.zb(low=low, high=high), gamma_decay=decay)


def preset_beta_eps(beta: float = 1.0, eps: float = 0.01) -> LrpConfig:
    """ LRP-beta on convs, LRP-eps on dense layers """
    return LrpConfig(dense=RuleSpec.epsilon(eps), conv=RuleSpec.beta_rule(beta))


#
#   Report
#

@dataclass(frozen=True)
class LrpReport:
    """ relevance sum held by every visited node, input last """

    target_value: float
    sums: Tuple[Tuple[str, float], ...]
    absorbed: int

    def sum_at(self, node: str) -> float:
        for name, value in self.sums:
            if name == node:
                return value
        raise GraphError('node carries no relevance: %s' % node)

    def leakage(self) -> List[Tuple[str, float]]:
        """ relative deviation of each node's sum from the seeded relevance """
        scale = abs(self.target_value) if self.target_value != 0 else 1.0
        return [(name, abs(value - self.target_value) / scale) for name, value in self.sums]


#
#   Rules
#

def _safe_div(num: np.ndarray, den: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    dead = np.abs(den) < TINY
    return np.where(dead, 0.0, num / np.where(dead, 1.0, den)), dead


def _sign0(z: np.ndarray) -> np.ndarray:
    """ sign with sign(0) = +1 """
    return np.where(z >= 0, 1.0, -1.0)


def _count_absorbed(dead: np.ndarray, relevance: np.ndarray) -> np.ndarray:
    """ per-row count of neurons whose non-zero relevance was dropped """
    lost = dead & (relevance != 0)
    return lost.reshape(lost.shape[0], -1).sum(axis=1)


def linear_rule(spec: RuleSpec, a: np.ndarray, weight: np.ndarray, bias: np.ndarray, relevance: np.ndarray,
                low: np.ndarray = None, high: np.ndarray = None) -> Tuple[np.ndarray, np.ndarray]:
    """
        a: M x I inputs, weight: O x I, bias: O, relevance: M x O
        returns (M x I input relevance, M-vector of absorbed neuron counts)
    """
    rule = spec.rule
    if rule in (Rule.LRP_0, Rule.EPSILON, Rule.GAMMA):
        w = weight + spec.gamma * np.maximum(weight, 0.0) if spec.gamma > 0 else weight
        z = a @ w.T + bias
        if spec.eps > 0:
            z = z + spec.eps * _sign0(z)
        s, dead = _safe_div(relevance, z)
        return a * (s @ w), _count_absorbed(dead, relevance)
    wp = np.maximum(weight, 0.0)
    wn = np.minimum(weight, 0.0)
    if rule == Rule.ZB:
        z = a @ weight.T - low @ wp.T - high @ wn.T
        s, dead = _safe_div(relevance, z)
        return a * (s @ weight) - low * (s @ wp) - high * (s @ wn), _count_absorbed(dead, relevance)
    # beta family: positive and negative contributions w_i a_i redistributed separately
    ap = np.maximum(a, 0.0)
    an = np.minimum(a, 0.0)
    zp = ap @ wp.T + an @ wn.T
    zn = ap @ wn.T + an @ wp.T
    if rule == Rule.ADAPTIVE_BETA:
        beta = adaptive_beta_array(positive=zp, negative=-zn, cap=spec.cap, variant=spec.variant)
    else:
        beta = np.full_like(zp, spec.beta)
    has_p = zp > TINY
    has_n = zn < -TINY
    # without negative contributions the neuron behaves as beta = 0
    beta = np.where(has_n, beta, 0.0)
    coef_p = np.where(has_p, relevance * (1.0 + beta) / np.where(has_p, zp, 1.0), 0.0)
    # only negative contributions: they carry all of the relevance
    coef_n = np.where(has_n, np.where(has_p, -relevance * beta, relevance) / np.where(has_n, zn, 1.0), 0.0)
    dead = ~has_p & ~has_n
    result = ap * (coef_p @ wp) + an * (coef_p @ wn) + ap * (coef_n @ wn) + an * (coef_n @ wp)
    return result, _count_absorbed(dead, relevance)


class _Propagator:
    """ one backward relevance pass over a batch """

    def __init__(self, model: ModelGraph, acts: Dict[str, np.ndarray], config: LrpConfig,
                 capture: Optional[str] = None):
        super().__init__()
        self.model = model
        self.acts = acts
        self.config = config
        self.rules = config.rules_for(model=model)
        self.capture = capture
        self.captured: Optional[Tuple[np.ndarray, np.ndarray]] = None
        n = acts[INPUT].shape[0]
        self.absorbed = np.zeros(n, dtype=np.int64)
        self.sums: List[Tuple[str, np.ndarray]] = []

    def run(self, seeds: Dict[str, np.ndarray]) -> np.ndarray:
        pending = {name: np.asarray(value, dtype=np.float64) for name, value in seeds.items()}
        for node in reversed(self.model.nodes):
            r = pending.pop(node.name, None)
            if r is None:
                continue
            self.sums.append((node.name, r.reshape(r.shape[0], -1).sum(axis=1)))
            if node.kind == LayerKind.INPUT:
                return r
            results = self.__node(node=node, r=r)
            if node.name == self.capture:
                self.captured = results
            for src, value in zip(node.inputs, results):
                previous = pending.get(src)
                pending[src] = value if previous is None else previous + value
        return np.zeros_like(self.acts[INPUT])

    def __node(self, node: Node, r: np.ndarray) -> Tuple[np.ndarray, ...]:
        kind = node.kind
        layer = node.layer
        model = self.model
        if kind in (LayerKind.RELU, ):
            return (r, )
        elif kind == LayerKind.FLATTEN:
            return (r.reshape(self.acts[node.inputs[0]].shape), )
        a = self.acts[node.inputs[0]]
        if kind == LayerKind.DENSE:
            spec = self.rules[node.name]
            weight = model.param(slot_name(node.name, 'weight'))
            bias = model.param(slot_name(node.name, 'bias'))
            low = high = None
            if spec.rule == Rule.ZB:
                low = np.full_like(a, spec.low)
                high = np.full_like(a, spec.high)
            result, absorbed = linear_rule(spec, a=a, weight=weight, bias=bias, relevance=r, low=low, high=high)
            self.absorbed += absorbed
            return (result, )
        elif kind == LayerKind.CONV2D:
            spec = self.rules[node.name]
            weight = model.param(slot_name(node.name, 'weight'))
            bias = model.param(slot_name(node.name, 'bias'))
            n, _, ho, wo = r.shape
            cols = im2col(a, layer=layer)
            low = high = None
            if spec.rule == Rule.ZB:
                # padded border stays at zero, like the input padding
                low = im2col(np.full_like(a, spec.low), layer=layer)
                high = im2col(np.full_like(a, spec.high), layer=layer)
            rows, absorbed = linear_rule(spec, a=cols, weight=weight.reshape(weight.shape[0], -1), bias=bias,
                                         relevance=to_rows(r), low=low, high=high)
            self.absorbed += absorbed.reshape(n, ho * wo).sum(axis=1)
            return (col2im(rows, layer=layer, input_shape=a.shape), )
        elif kind == LayerKind.AVG_POOL:
            spec = self.rules[node.name]
            k = layer.kernel
            windows = pool_windows(a, kernel=k)
            if spec.rule == Rule.POOL_SQUARED:
                windows = windows * windows
            total = windows.sum(axis=-1, keepdims=True)
            # empty windows spread evenly
            share = np.where(total != 0, windows / np.where(total != 0, total, 1.0), 1.0 / (k * k))
            return (unpool_windows(share * r[..., np.newaxis], kernel=k), )
        elif kind == LayerKind.MAX_POOL:
            k = layer.kernel
            windows = pool_windows(a, kernel=k)
            winner = np.argmax(windows, axis=-1)
            mask = np.zeros_like(windows)
            np.put_along_axis(mask, winner[..., np.newaxis], 1.0, axis=-1)
            return (unpool_windows(mask * r[..., np.newaxis], kernel=k), )
        elif kind == LayerKind.RESIDUAL_ADD:
            skip = a
            weighted = self.acts[node.inputs[1]]
            z = skip + weighted
            z = z + self.config.residual_eps * _sign0(z)
            s, dead = _safe_div(r, z)
            self.absorbed += _count_absorbed(dead, r)
            return skip * s, weighted * s
        elif kind == LayerKind.BIAS_ONLY:
            bias = model.param(slot_name(node.name, 'bias'))
            s, dead = _safe_div(r, a + channel_view(bias, ndim=a.ndim))
            self.absorbed += _count_absorbed(dead, r)
            return (a * s, )
        raise ShapeError('no relevance rule for node "%s" of kind %s' % (node.name, kind))


@dataclass(frozen=True)
class Propagation:
    relevance: np.ndarray                   # N x input shape
    reports: Tuple[LrpReport, ...]
    captured: Optional[Tuple[np.ndarray, np.ndarray]] = None


def propagate(model: ModelGraph, acts: Dict[str, np.ndarray], seeds: Dict[str, np.ndarray], config: LrpConfig,
              capture: Optional[str] = None) -> Propagation:
    """
        push batched relevance `seeds` ({node: N x node shape}) down to the input;
        `capture` names a ResidualAdd whose (skip, weighted) split is returned
    """
    for name in seeds:
        model.node(name)
    engine = _Propagator(model=model, acts=acts, config=config, capture=capture)
    relevance = engine.run(seeds=seeds)
    n = relevance.shape[0]
    start = {name: value.reshape(n, -1).sum(axis=1) for name, value in seeds.items()}
    reports = []
    for i in range(n):
        target = float(sum(value[i] for value in start.values()))
        sums = tuple((name, float(value[i])) for name, value in engine.sums)
        reports.append(LrpReport(target_value=target, sums=sums, absorbed=int(engine.absorbed[i])))
    return Propagation(relevance=relevance, reports=tuple(reports), captured=engine.captured)


def logit_seed(model: ModelGraph, logits: np.ndarray, target: int) -> np.ndarray:
    """ zeros except the selected logit, which keeps its value """
    if not 0 <= target < model.classes:
        raise SelectorError('output selector %d out of range [0, %d)' % (target, model.classes))
    flat = logits.reshape(logits.shape[0], -1)
    seed = np.zeros_like(flat)
    seed[:, target] = flat[:, target]
    return seed.reshape(logits.shape)


#
#   Public operations
#

def lrp_batch(model: ModelGraph, batch: np.ndarray, target: int, config: LrpConfig) -> Propagation:
    acts = forward_batch(model=model, batch=batch)
    seed = logit_seed(model=model, logits=acts[model.output], target=target)
    return propagate(model=model, acts=acts, seeds={model.output: seed}, config=config)


def lrp(model: ModelGraph, x: np.ndarray, target: int, config: LrpConfig, method: str = 'lrp') -> AttributionMap:
    """ relevance map at the input; the LrpReport rides along as `report` """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != model.input_shape:
        raise ShapeError('node "%s" expects shape %s, got %s' % (INPUT, model.input_shape, x.shape))
    result = lrp_batch(model=model, batch=x[np.newaxis], target=target, config=config)
    return AttributionMap(values=result.relevance[0], method=method, target=logit_target(target),
                          report=result.reports[0])


def attribute_intermediate(model: ModelGraph, x: np.ndarray, node_id: str, config: LrpConfig,
                           selector: Optional[int] = None, method: str = 'lrp') -> AttributionMap:
    """
        target = sum of activations at `node_id` (or one element of it, given `selector`);
        relevance reaches the input through the part of the model below the node
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != model.input_shape:
        raise ShapeError('node "%s" expects shape %s, got %s' % (INPUT, model.input_shape, x.shape))
    acts = forward_batch(model=model, batch=x[np.newaxis])
    if not model.has_node(node_id):
        raise GraphError('node not found: %s' % node_id)
    seed = np.array(acts[node_id])
    if selector is not None:
        flat = seed.reshape(1, -1)
        if not 0 <= selector < flat.shape[1]:
            raise SelectorError('selector %d out of range [0, %d) at node %s' % (selector, flat.shape[1], node_id))
        picked = np.zeros_like(flat)
        picked[0, selector] = flat[0, selector]
        seed = picked.reshape(seed.shape)
    result = propagate(model=model, acts=acts, seeds={node_id: seed}, config=config)
    return AttributionMap(values=result.relevance[0], method=method, target=sum_target(node_id),
                          report=result.reports[0])
