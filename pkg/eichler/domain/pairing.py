# 该模块解决尖形式与上闭链的配对、Petersson内积以及Roelcke内积的计算问题
from __future__ import annotations

import cmath
import logging
import math
from typing import *

import numpy as np

from eichler.domain.automorphy import S, T
from eichler.domain.common import IncompatibleWeights, DimensionMismatch, UnsupportedGroup, ValidationError, \
    BeanContainer, compensated_sum, do_log, EscapeParam
from eichler.domain.eichler import CocycleEvaluator, fit_growth_bound
from eichler.domain.forms import FourierForm, VectorForm
from eichler.domain.fundamental_domain import FundamentalDomain, sl2z_domain
from eichler.domain.quadrature import QuadratureSpec, Estimate, TailMode, integrate, integrate_path, \
    upper_gamma_scaled

# ∞边截断到 f 衰减了 e^{-CUSP_DECAY} 的高度
CUSP_DECAY = 40.0


def c_constant(r) -> complex:
    """
    C_{2−r} = −(i/2)·(−2i)^r，主值Log(−2i) = ln2 − iπ/2
    """
    return -0.5j * cmath.exp(float(r) * cmath.log(-2j))


class PairingResult(object):
    def to_dict(self):
        return {"value": [self.value.real, self.value.imag], "error_estimate": self.error_estimate,
                "per_edge": [[i, [c.real, c.imag]] for i, c in self.per_edge],
                "truncation_height": self.truncation_height, "tail_bound": self.tail_bound, "flags": self.flags}

    def __init__(self, value: complex, error_estimate: float, per_edge: List[Tuple[int, complex]],
                 truncation_height: float, tail_bound: float, flags: List[str] = None):
        self.value = value
        self.error_estimate = error_estimate
        self.per_edge = per_edge
        self.truncation_height = truncation_height
        self.tail_bound = tail_bound
        self.flags = flags if flags else []


def _defaults(F: FundamentalDomain, q: QuadratureSpec) -> Tuple[FundamentalDomain, QuadratureSpec]:
    F = F if F else BeanContainer.get_or_default(FundamentalDomain, sl2z_domain)
    q = q if q else BeanContainer.get_or_default(QuadratureSpec, QuadratureSpec)
    return F, q


def _scalar_components(f) -> List[FourierForm]:
    return list(f.components) if isinstance(f, VectorForm) else [f]


def _check_compatible(f, phi: CocycleEvaluator):
    dimension = getattr(f, 'dimension', 1)
    if dimension != phi.dimension:
        raise DimensionMismatch("形式维数{}与上闭链维数{}不一致".format(dimension, phi.dimension))
    if abs(float(f.weight) + float(phi.weight) - 2) > 1e-12:
        raise IncompatibleWeights("f的权重{}与上闭链的权重{}之和不是2".format(f.weight, phi.weight))
    for gamma in (S, T):
        v_f = f.multiplier.value(gamma)
        v_phi = phi.multiplier.value(gamma)
        if abs(v_f - v_phi.conjugate()) > 1e-9:
            raise IncompatibleWeights("f的乘子在{}上为{}，不是上闭链乘子{}的共轭".format(gamma, v_f, v_phi))


def _edge_integrand(f, phi: CocycleEvaluator, alpha, min_height: float) -> Callable:
    """
    f(z)·φ(α)(z)，向量情形为 Σ f_i(z)φ_i(α)(z)
    """
    sampler = phi.sampler(alpha)

    def integrand(z):
        values = np.asarray(f.automorphic(z, min_height), dtype=complex) * np.asarray(sampler(z), dtype=complex)
        if values.ndim > np.ndim(z):
            values = values.sum(axis=-1)
        return values

    return integrand


def _decay_envelope(f, height: float) -> Tuple[float, float]:
    """
    y ≥ height时 |f(z)| ≤ C_f·e^{−βy}
    :return: (C_f, β)
    """
    components = _scalar_components(f)
    beta = min(c.decay_rate for c in components)
    total = 0.0
    for c in components:
        for n, a, beta_n in c.nonzero_terms():
            total += abs(a) * math.exp(-(beta_n - beta) * height)
        total += c.tail_bound(height) * math.exp(beta * height)
    return total, beta


def _cusp_tail(f, phi: CocycleEvaluator, alpha, x0: float, height: float) -> float:
    """
    ∫_{height}^∞ |f·φ(α)| 沿 Re z = x0 的上界，φ的增长由拟合的𝒫界给出
    """
    grid = [complex(x0, y) for y in np.geomspace(max(1.0, height / 4), height, 6)]
    growth = fit_growth_bound(phi, alpha, grid)
    envelope, beta = _decay_envelope(f, height)
    shift = abs(x0)
    polynomial = upper_gamma_scaled(growth.A + 1, beta * (height + shift),
                                    beta * shift - (growth.A + 1) * math.log(beta))
    constant = math.exp(-beta * height) / beta
    return envelope * growth.K * (polynomial + constant)


def _pair(f, phi: CocycleEvaluator, F: FundamentalDomain, q: QuadratureSpec) -> PairingResult:
    _check_compatible(f, phi)
    r = phi.weight
    constant = c_constant(r)
    finite = [i for i in F.representatives if not F.edges[i].touches_infinity]
    cusp = [i for i in F.representatives if F.edges[i].touches_infinity]
    contributions: Dict[int, Estimate] = {}
    for i in finite:
        edge = F.edges[i]
        integrand = _edge_integrand(f, phi, edge.pairing, q.min_height)
        contributions[i] = integrate_path(integrand, edge.truncated(q.height), q)
    scale = max([abs(e.value) for e in contributions.values()] + [0.0])
    beta = min(c.decay_rate for c in _scalar_components(f))
    height = max(q.height, CUSP_DECAY / beta)
    tail = 0.0
    for i in cusp:
        edge = F.edges[i]
        integrand = _edge_integrand(f, phi, edge.pairing, q.min_height)
        geodesic = edge.truncated(height)
        contributions[i] = integrate_path(integrand, geodesic, q, scale)
        tail += _cusp_tail(f, phi, edge.pairing, geodesic.start.real, height)
    per_edge = [(i, contributions[i].value) for i in F.representatives]
    total = compensated_sum(v for _, v in per_edge)
    error = math.fsum(e.error for e in contributions.values()) + tail
    flags = []
    if any(float(c.weight) == 1.0 for c in _scalar_components(f)):
        flags.append("weight_one")
        logging.warning("权重1的配对只计算，不做对偶性断言")
    return PairingResult(-constant * total, abs(constant) * error, per_edge, height, abs(constant) * tail, flags)


@do_log(target_name='pair_cocycle', escape_params=[EscapeParam(2, 'F')])
def pair_cocycle(f: FourierForm, phi: CocycleEvaluator, F: FundamentalDomain = None,
                 q: QuadratureSpec = None) -> PairingResult:
    """
    (f, φ) = −C_{2−r}·Σ_m ∫_{A_{i_m}}^{A_{i_m+1}} f(z)φ(α_{i_m})(z)dz
    """
    F, q = _defaults(F, q)
    if isinstance(f, VectorForm):
        raise DimensionMismatch("向量形式请用pair_vector")
    return _pair(f, phi, F, q)


@do_log(target_name='pair_vector', escape_params=[EscapeParam(2, 'F')])
def pair_vector(f: Union[VectorForm, FourierForm], phi: CocycleEvaluator, F: FundamentalDomain = None,
                q: QuadratureSpec = None) -> PairingResult:
    F, q = _defaults(F, q)
    return _pair(f, phi, F, q)


def _require_sl2z(F: FundamentalDomain):
    if not F.ctx.is_sl2z:
        raise UnsupportedGroup("二维积分目前只实现了SL2Z的基本域")


def _sample_scale(integrand: Callable, height: float) -> float:
    xs, ys = np.meshgrid(np.linspace(-0.45, 0.45, 5), np.geomspace(1.0, height, 7))
    values = np.abs(integrand((xs + 1j * ys).ravel()))
    return float(np.max(values)) * 0.25


def _domain_integral(integrand: Callable, q: QuadratureSpec, y_top: float,
                     scale: float, y_floor: Callable[[float], float] = None) -> Estimate:
    """
    ∫_{−1/2}^{1/2} ∫_{y_floor(x)}^{y_top} integrand dy dx，外层对x、内层对y自适应
    """
    y_floor = y_floor if y_floor else (lambda x: math.sqrt(max(1.0 - x * x, 0.0)))
    abs_tol = min(q.abs_tol, q.rel_tol * scale) if scale > 0 else q.abs_tol
    outer_spec = QuadratureSpec(abs_tol, q.rel_tol, q.max_subdivisions, q.height, q.tail_mode.value, q.min_height,
                                q.initial_panels)
    inner_spec = QuadratureSpec(abs_tol / 10, q.rel_tol / 10, q.max_subdivisions, q.height, q.tail_mode.value,
                                q.min_height, q.initial_panels)
    inner_errors = []

    def inner(x: float) -> complex:
        def column(ys):
            return integrand(x + 1j * np.asarray(ys, dtype=float))

        estimate = integrate(column, y_floor(x), y_top, inner_spec)
        inner_errors.append(estimate.error)
        return estimate.value

    def outer(xs):
        return np.array([inner(float(x)) for x in xs], dtype=complex)

    estimate = integrate(outer, -0.5, 0.5, outer_spec)
    # 内层误差按外层最大的绝对值积累
    estimate.error += max(inner_errors) if inner_errors else 0.0
    return estimate


def _fourier_tail(f: FourierForm, g: FourierForm, r: float, height: float) -> Estimate:
    """
    y > Y部分按Fourier正交性逐项精确：Σ a_n conj(b_n)(2β_n)^{r−1}Γ(1−r, 2β_n Y)
    """
    b_terms = {n: (b, beta) for n, b, beta in g.nonzero_terms()}
    values = []
    for n, a, beta in f.nonzero_terms():
        if n not in b_terms:
            continue
        b = b_terms[n][0]
        values.append(a * b.conjugate() * upper_gamma_scaled(1 - r, 2 * beta * height, (r - 1) * math.log(2 * beta)))
    beta0 = min(f.decay_rate, g.decay_rate)
    sup_f = sum(abs(a) * math.exp(-beta * height) for _, a, beta in f.nonzero_terms())
    sup_g = sum(abs(b) * math.exp(-beta * height) for _, b, beta in g.nonzero_terms())
    cross = f.tail_bound(height) * sup_g + g.tail_bound(height) * sup_f + f.tail_bound(height) * g.tail_bound(height)
    bound = cross * upper_gamma_scaled(1 - r, 2 * beta0 * height, 2 * beta0 * height + (r - 1) * math.log(2 * beta0))
    return Estimate(compensated_sum(values), bound, 0, len(values))


def petersson_estimate(f: FourierForm, g: FourierForm, F: FundamentalDomain = None,
                       q: QuadratureSpec = None) -> Estimate:
    F, q = _defaults(F, q)
    _require_sl2z(F)
    if abs(float(f.weight) - float(g.weight)) > 1e-12:
        raise IncompatibleWeights("f与g的权重不同: {} vs {}".format(f.weight, g.weight))
    for gamma in (S, T):
        if abs(f.multiplier.value(gamma) - g.multiplier.value(gamma)) > 1e-9:
            raise IncompatibleWeights("f与g的乘子在{}上不同".format(gamma))
    if abs(f.kappa_float - g.kappa_float) > 1e-12 or f.width != 1 or g.width != 1:
        raise ValidationError("Petersson内积要求相同的κ且λ = 1")
    r = 2 - float(f.weight)
    height = q.height

    def integrand(zs: np.ndarray) -> np.ndarray:
        return f(zs) * np.conj(g(zs)) * zs.imag ** (-r)

    body = _domain_integral(integrand, q, height, _sample_scale(integrand, height))
    return body + _fourier_tail(f, g, r, height)


@do_log(target_name='petersson_direct', escape_params=[EscapeParam(2, 'F')])
def petersson_direct(f: FourierForm, g: FourierForm, F: FundamentalDomain = None,
                     q: QuadratureSpec = None) -> complex:
    """
    (f, g) = ∫_{Γ\\H} f(z)·conj(g(z))·y^{−r} dxdy，2−r是公共权重
    """
    return petersson_estimate(f, g, F, q).value


def inner_product_R_estimate(F1: Callable, F2: Callable, F: FundamentalDomain = None, q: QuadratureSpec = None,
                             tail_bound: float = 0.0) -> Estimate:
    F, q = _defaults(F, q)
    _require_sl2z(F)

    # F1、F2在数组上求值；向量值的最后一维求和
    def integrand(zs: np.ndarray) -> np.ndarray:
        values = np.asarray(F1(zs), dtype=complex) * np.conj(np.asarray(F2(zs), dtype=complex))
        if values.ndim > zs.ndim:
            values = values.sum(axis=-1)
        return values / zs.imag ** 2

    height = q.height
    scale = _sample_scale(integrand, height)
    estimate = _domain_integral(integrand, q, height, scale)
    if q.tail_mode == TailMode.DOUBLING:
        strip = _domain_integral(integrand, q, 2 * height, scale, lambda x: height)
        estimate = Estimate(estimate.value + strip.value, estimate.error + strip.error + abs(strip.value),
                            estimate.panels + strip.panels, estimate.evaluations + strip.evaluations)
    else:
        estimate.error += tail_bound
    return estimate


def inner_product_R(F1: Callable, F2: Callable, F: FundamentalDomain = None, q: QuadratureSpec = None,
                    tail_bound: float = 0.0) -> complex:
    """
    (F1, F2)^R = ∫_F F1(z)·conj(F2(z)) dxdy/y²
    """
    return inner_product_R_estimate(F1, F2, F, q, tail_bound).value
