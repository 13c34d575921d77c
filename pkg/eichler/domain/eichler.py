# 该模块解决辅助Eichler积分G、Eichler上闭链、上边缘、单边平均方程求解以及整数权重下周期多项式提取的问题
from __future__ import annotations

import cmath
import logging
import math
from abc import ABCMeta, abstractmethod
from typing import *

import numpy as np
import scipy.linalg
import statsmodels.api as sm
from numpy.polynomial import Polynomial

from eichler.domain.automorphy import Mat2, MultiplierSystem, mobius, j_pow, slash, decompose_ST, WORD_MATRICES, \
    T, S, I
from eichler.domain.common import ValidationError, IncompatibleWeights, CuspNotRational, Divergent, \
    ResonantFrequency, NonUnitary, NotPolynomial, UnsupportedGroup, DimensionMismatch
from eichler.domain.forms import FourierForm, VectorForm
from eichler.domain.fundamental_domain import reduce_to_domain
from eichler.domain.quadrature import QuadratureSpec, Estimate, integrate, integrate_semi_infinite, \
    upper_gamma_scaled

# 单项尾部用不完全Gamma精确计算的上限：β·高度超过它的项只做估计
EXACT_TAIL_LIMIT = 100.0
# cocycle_eval_direct在这个高度把射线分成上下两段
SPLIT_HEIGHT = 1.0


class CocycleEvaluator(metaclass=ABCMeta):
    """
    上闭链 γ ↦ φ(γ)(z)，权重r、乘子v
    """
    weight = None
    multiplier: MultiplierSystem = None
    dimension = 1

    @abstractmethod
    def __call__(self, gamma: Mat2, z: complex):
        pass

    def sampler(self, gamma: Mat2) -> Callable:
        def func(z):
            if np.ndim(z) == 0:
                return self(gamma, complex(z))
            z_arr = np.asarray(z, dtype=complex)
            values = [self(gamma, complex(w)) for w in z_arr.ravel()]
            if self.dimension == 1:
                return np.array(values, dtype=complex).reshape(z_arr.shape)
            return np.array(values, dtype=complex).reshape(z_arr.shape + (self.dimension,))

        return func


class CocycleHandle(CocycleEvaluator):
    """
    由尖形式g ∈ S_{2−r}(v̄)构造的Eichler上闭链 φ_g^∞(γ) = G|γ − G
    """

    def __call__(self, gamma: Mat2, z: complex) -> complex:
        return cocycle_eval(self, gamma, z)

    def aux(self, z: complex, path: str = 'vertical') -> Estimate:
        return aux_integral(self.g, self.weight, z, self.quadrature, path, self.multiplier)

    def to_dict(self):
        return {"g": self.g.to_dict(), "weight": float(self.weight), "quadrature": self.quadrature.to_dict(),
                "weight_one": self.weight_one}

    def __init__(self, g: FourierForm, quadrature: QuadratureSpec = None):
        if not isinstance(g, FourierForm):
            raise ValidationError("CocycleHandle需要标量FourierForm，向量形式请用VectorCocycle")
        if not g.cusp_form:
            raise ValidationError("Eichler积分要求g是尖形式")
        self.g = g
        self.weight = 2 - g.weight
        self.multiplier = g.multiplier.conjugate(weight=self.weight)
        self.quadrature = quadrature if quadrature else QuadratureSpec()
        self.weight_one = float(g.weight) == 1.0
        if self.weight_one:
            logging.warning("g的权重为1，对应的对偶性不做断言")


class VectorCocycle(CocycleEvaluator):
    """
    向量值g的上闭链，ρ为对角矩阵时逐分量化为标量情形
    """

    def __call__(self, gamma: Mat2, z: complex) -> np.ndarray:
        return np.array([c(gamma, z) for c in self.components], dtype=complex)

    def to_dict(self):
        return {"dimension": self.dimension, "weight": float(self.weight),
                "components": [c.to_dict() for c in self.components]}

    def __init__(self, g: VectorForm, quadrature: QuadratureSpec = None):
        rho_s, rho_t = g.multiplier.rho_s, g.multiplier.rho_t
        for m in (rho_s, rho_t):
            if not np.allclose(m, np.diag(np.diag(m)), atol=1e-12):
                raise UnsupportedGroup("向量上闭链目前只支持对角的ρ")
        self.components = [CocycleHandle(c, quadrature) for c in g.components]
        self.weight = 2 - g.weight
        self.multiplier = g.multiplier.conjugate(weight=self.weight)
        self.dimension = g.dimension
        self.quadrature = self.components[0].quadrature


class Coboundary(CocycleEvaluator):
    """
    上边缘 dh: γ ↦ h|γ − h
    """

    def __call__(self, gamma: Mat2, z):
        return coboundary_apply(self.h, gamma, self.weight, self.multiplier)(z)

    def to_dict(self):
        return {"h": getattr(self.h, '__name__', repr(self.h)), "weight": float(self.weight)}

    def __init__(self, h: Callable, r, v: MultiplierSystem):
        self.h = h
        self.weight = r
        self.multiplier = v
        self.dimension = getattr(h, 'dimension', 1)


def _check_weight(g: FourierForm, r):
    if abs(float(g.weight) + float(r) - 2) > 1e-12:
        raise IncompatibleWeights("g的权重{}与2−r={}不一致".format(g.weight, 2 - float(r)))


def _ray_tail(g: FourierForm, r: float, x: float, y: float, s0: float) -> Estimate:
    """
    ∫_{s0}^∞ g(x + i(s−y)) s^{−r} ds，逐项为 a_n e^{2πi(n+κ)x/λ} e^{β_n y} β_n^{r−1} Γ(1−r, β_n s0)
    """
    height = s0 - y
    values = []
    skipped = 0.0
    beta_star = None
    for n, a, beta in g.nonzero_terms():
        if beta * height <= EXACT_TAIL_LIMIT:
            integral = upper_gamma_scaled(1 - r, beta * s0, beta * y + (r - 1) * math.log(beta))
            values.append(a * cmath.exp(1j * beta * x) * integral)
        else:
            if beta_star is None:
                beta_star = beta
            skipped += abs(a) * math.exp(-beta * height)
    beta_trunc = 2 * math.pi * (g.truncation + 1 + g.kappa_float) / g.width
    beta_star = beta_trunc if beta_star is None else min(beta_star, beta_trunc)
    weight = skipped + g.tail_bound(height)
    bound = 0.0
    if weight > 0:
        bound = weight * upper_gamma_scaled(1 - r, beta_star * s0, beta_star * s0 + (r - 1) * math.log(beta_star))
    re = math.fsum(v.real for v in values)
    im = math.fsum(v.imag for v in values)
    return Estimate(complex(re, im), bound, 0, len(values))


def _vertical_aux(g: FourierForm, r: float, z: complex, spec: QuadratureSpec) -> Estimate:
    """
    G(z) = conj(−i·e^{−iπr/2}∫_0^∞ g(z+it)(2y+t)^{−r}dt)，高度Y以下数值积分，以上逐项精确
    """
    x, y = z.real, z.imag
    top = max(spec.height - y, 0.0)
    body = Estimate(0, 0)
    if top > 0:
        def integrand(t):
            return g(z + 1j * t) * (2 * y + t) ** (-r)

        body = integrate(integrand, 0.0, top, spec)
        body.error += top * g.tail_bound(y) * max((2 * y) ** (-r), (2 * y + top) ** (-r))
    total = body + _ray_tail(g, r, x, y, 2 * y + top)
    value = (-1j * cmath.exp(-1j * math.pi * r / 2) * total.value).conjugate()
    return Estimate(value, total.error, total.panels, total.evaluations)


def _kinked_aux(g: FourierForm, r: float, z: complex, spec: QuadratureSpec) -> Estimate:
    """
    另一条积分路径：先走直线到 i(y+1)，再竖直向上
    """
    z_bar = z.conjugate()
    corner = complex(0, z.imag + 1)

    def segment(u):
        tau = z + u * (corner - z)
        return g(tau) * np.exp(-r * np.log(tau - z_bar)) * (corner - z)

    def vertical(t):
        tau = corner + 1j * t
        return g(tau) * np.exp(-r * np.log(tau - z_bar)) * 1j

    first = integrate(segment, 0.0, 1.0, spec)
    second = integrate_semi_infinite(vertical, 0.0, g.decay_rate, spec, abs(first.value))
    total = first + second
    return Estimate((-total.value).conjugate(), total.error, total.panels, total.evaluations)


def aux_integral(g: FourierForm, r, z: complex, q: QuadratureSpec = None, path: str = 'vertical',
                 multiplier: MultiplierSystem = None) -> Estimate:
    """
    辅助积分 G(z) = conj(−∫_z^{i∞} g(τ)(τ − z̄)^{−r}dτ)
    :param g: 权重2−r的尖形式
    :param r:
    :param z:
    :param q:
    :param path: vertical | kinked
    :param multiplier: G的乘子v(即g乘子的共轭)，低于min_height的点用它做模约化
    :return:
    """
    q = q if q else QuadratureSpec()
    _check_weight(g, r)
    z = complex(z)
    if z.imag <= 0:
        raise ValidationError("z必须在上半平面:{}".format(z))
    if g.is_zero:
        return Estimate(0, 0)
    rf = float(r)
    if path == 'kinked':
        if z.imag < q.min_height:
            raise ValidationError("kinked路径只用于Im z ≥ {}".format(q.min_height))
        return _kinked_aux(g, rf, z, q)
    if path != 'vertical':
        raise ValidationError("未知的积分路径:{}".format(path))
    if z.imag >= q.min_height:
        return _vertical_aux(g, rf, z, q)
    v = multiplier if multiplier else g.multiplier.conjugate(weight=r)
    # z = δ·w0，G(δw0) = v(δ)j(δ,w0)^r [G(w0) + φ(δ)(w0)]
    rho, w0 = reduce_to_domain(z)
    delta = rho.inverse()
    base = _vertical_aux(g, rf, w0, q)
    period = _word_period(g, r, v, delta, w0, q)
    factor = v.value(delta) * j_pow(delta, w0, r)
    value = factor * (base.value + period.value)
    return Estimate(value, abs(factor) * (base.error + period.error), base.panels + period.panels,
                    base.evaluations + period.evaluations)


def _word_period(g: FourierForm, r, v: MultiplierSystem, delta: Mat2, w: complex, q: QuadratureSpec) -> Estimate:
    """
    φ(δ)(w) = Σ φ(M_i)|R_i (w)，只有S这一类字母有非零的周期，φ(T^±1) = φ(−I) = 0
    """
    word = decompose_ST(delta)
    total = Estimate(0, 0)
    suffix = I
    for label in reversed(word):
        if label == 'S':
            u = mobius(suffix, w)
            period = _ray_period(g, r, S, u, q)
            factor = v.value(suffix).conjugate() * j_pow(suffix, w, -r)
            total = total + Estimate(factor * period.value, abs(factor) * period.error, period.panels,
                                     period.evaluations)
        suffix = WORD_MATRICES[label] * suffix
    return total


def _ray_period(g: FourierForm, r, gamma: Mat2, z: complex, q: QuadratureSpec) -> Estimate:
    """
    conj(∫_{γ^{-1}∞}^{i∞} g(τ)(τ − z̄)^{−r}dτ)，沿过尖点的竖直线，高度SPLIT_HEIGHT以下用g的模变换换到∞附近
    """
    if gamma.c == 0:
        return Estimate(0, 0)
    if not gamma.is_integral:
        raise CuspNotRational("γ = {}不在SL2(Z)中".format(gamma))
    rf = float(r)
    k = float(g.weight)
    a, c, d = gamma.a, gamma.c, gamma.d
    cusp = -d / c
    z_bar = complex(z).conjugate()
    rate = g.decay_rate

    def upper(t):
        tau = cusp + 1j * t
        return g(tau) * np.exp(-rf * np.log(tau - z_bar)) * 1j

    v_bar = g.multiplier.value(gamma).conjugate()

    def lower(s):
        # t = 1/(c²s)，g(q+it) = v̄_g(γ) j(γ,q+it)^{−k} g(γ(q+it))，j = i/(cs)
        s = np.asarray(s, dtype=float)
        j = 1j / (c * s)
        tau = cusp + 1j / (c * c * s)
        values = g.automorphic(a / c + 1j * s, q.min_height)
        return v_bar * np.exp(-k * np.log(j)) * values * np.exp(-rf * np.log(tau - z_bar)) * 1j / (c * c * s * s)

    top = integrate_semi_infinite(upper, SPLIT_HEIGHT, rate, q)
    bottom = integrate_semi_infinite(lower, 1.0 / (c * c * SPLIT_HEIGHT), rate, q, abs(top.value))
    total = top + bottom
    return Estimate(total.value.conjugate(), total.error, total.panels, total.evaluations)


def cocycle_estimate(c: CocycleHandle, gamma: Mat2, z: complex) -> Estimate:
    z = complex(z)
    if z.imag <= 0:
        raise ValidationError("z必须在上半平面:{}".format(z))
    if c.g.is_zero:
        return Estimate(0, 0)
    w = mobius(gamma, z)
    g_w = c.aux(w)
    g_z = c.aux(z)
    factor = c.multiplier.value(gamma).conjugate() * j_pow(gamma, z, -c.weight)
    return Estimate(factor * g_w.value - g_z.value, abs(factor) * g_w.error + g_z.error,
                    g_w.panels + g_z.panels, g_w.evaluations + g_z.evaluations)


def cocycle_eval(c: CocycleHandle, gamma: Mat2, z: complex) -> complex:
    """
    φ(γ)(z) = v̄(γ)j(γ,z)^{−r}G(γz) − G(z)
    """
    return cocycle_estimate(c, gamma, z).value


def cocycle_eval_direct(c: CocycleHandle, gamma: Mat2, z: complex) -> complex:
    """
    按定义沿尖点γ^{-1}∞出发的竖直线积分，作为cocycle_eval的独立校验
    """
    z = complex(z)
    if z.imag <= 0:
        raise ValidationError("z必须在上半平面:{}".format(z))
    if c.g.is_zero:
        return 0j
    return _ray_period(c.g, c.weight, gamma, z, c.quadrature).value


def coboundary_apply(h: Callable, gamma: Mat2, r, v: MultiplierSystem) -> Callable:
    """
    z ↦ v̄(γ)j(γ,z)^{−r}h(γz) − h(z)
    """
    slashed = slash(h, gamma, r, v)

    def sampler(z):
        return slashed(z) - h(z)

    sampler.dimension = getattr(h, 'dimension', 1)
    return sampler


def cocycle_condition_residual(phi: CocycleEvaluator, gamma: Mat2, delta: Mat2, z: complex) -> Tuple[float, float]:
    """
    φ(γδ) − φ(γ)|δ − φ(δ) 在z处的残差
    :return: (残差, 三项模长之和)
    """
    whole = np.asarray(phi(gamma * delta, z))
    slashed = np.asarray(slash(phi.sampler(gamma), delta, phi.weight, phi.multiplier)(z))
    last = np.asarray(phi(delta, z))
    residual = float(np.max(np.abs(whole - slashed - last)))
    scale = float(np.max(np.abs(whole)) + np.max(np.abs(slashed)) + np.max(np.abs(last)))
    return residual, scale


class FrequencySeries(object):
    """
    Σ c_m e^{2πimz/s}，m可以是实数，c_m可以是向量
    """

    def __call__(self, z):
        z_arr = np.asarray(z, dtype=complex)
        total = None
        for m, coefficient in self.terms.items():
            phase = np.exp(2j * np.pi * m * z_arr / self.s)
            term = np.multiply.outer(phase, coefficient) if np.ndim(coefficient) > 0 else phase * coefficient
            total = term if total is None else total + term
        if total is None:
            return 0j if np.ndim(z) == 0 else np.zeros(z_arr.shape, dtype=complex)
        if np.ndim(z) == 0 and np.ndim(total) == 0:
            return complex(total)
        return total

    def __init__(self, terms: Dict[float, Union[complex, np.ndarray]], s: float = 1.0):
        if s == 0:
            raise ValidationError("周期s不能为0")
        self.terms = {float(m): (np.asarray(c, dtype=complex) if np.ndim(c) > 0 else complex(c))
                      for m, c in terms.items()}
        self.s = float(s)


def _unitary_basis(eps) -> Tuple[np.ndarray, np.ndarray]:
    """
    U = Z·T·Z^H，U酉时T是对角的
    """
    u = np.atleast_2d(np.asarray(eps, dtype=complex))
    if u.shape[0] != u.shape[1]:
        raise DimensionMismatch("U必须是方阵")
    if not np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=1e-10):
        raise NonUnitary("U不是酉矩阵")
    t, z = scipy.linalg.schur(u, output='complex')
    return np.diag(t), z


def _solve_fourier(g: FrequencySeries, eps: complex) -> FrequencySeries:
    terms = {}
    for m, coefficient in g.terms.items():
        den = eps.conjugate() * cmath.exp(2j * math.pi * m) - 1
        if abs(den) < 1e-12:
            raise ResonantFrequency("频率m={}与ε={}共振".format(m, eps))
        terms[m] = coefficient / den
    return FrequencySeries(terms, g.s)


def _check_decay(g: Callable, s: float, anchor: complex = 1j):
    early = max(float(np.max(np.abs(g(anchor + n * s)))) for n in range(0, 9))
    late = max(float(np.max(np.abs(g(anchor + n * s)))) for n in range(32, 65, 4))
    if early == 0:
        return
    if late > 1e-3 * early:
        raise Divergent("g(z+ns)不是几何衰减的: n≤8时{}，n≥32时{}".format(early, late))


def one_sided_average_solve(g: Union[Callable, FrequencySeries], eps, s: float = 1.0, mode: str = 'geometric',
                            tol: float = 1e-15, max_terms: int = 10000) -> Callable:
    """
    解 ε̄f(z+s) − f(z) = g(z)；ε为矩阵U时解 U^H f(z+s) − f(z) = g(z)
    :param g: geometric模式下是可求值的函数，fourier模式下是FrequencySeries
    :param eps: |ε| = 1的复数或者酉矩阵
    :param s: 平移量
    :param mode: geometric | fourier
    :param tol: 几何级数的相对截断误差
    :param max_terms:
    :return: f
    """
    if s == 0:
        raise ValidationError("s不能为0")
    matrix = np.ndim(eps) > 0
    if not matrix:
        eps = complex(eps)
        if abs(abs(eps) - 1) > 1e-10:
            raise NonUnitary("|ε| = {} ≠ 1".format(abs(eps)))
    if mode == 'fourier':
        if not isinstance(g, FrequencySeries):
            raise ValidationError("fourier模式需要FrequencySeries")
        if not matrix:
            return _solve_fourier(g, eps)
        diag, basis = _unitary_basis(eps)
        rotated = {m: basis.conj().T @ np.asarray(c, dtype=complex) for m, c in g.terms.items()}
        terms = {m: np.zeros(len(diag), dtype=complex) for m in rotated}
        for idx, eps_j in enumerate(diag):
            solved = _solve_fourier(FrequencySeries({m: c[idx] for m, c in rotated.items()}, g.s), eps_j)
            for m, c in solved.terms.items():
                terms[m][idx] = c
        return FrequencySeries({m: basis @ c for m, c in terms.items()}, g.s)
    if mode != 'geometric':
        raise ValidationError("未知的求解模式:{}".format(mode))
    _check_decay(g, s)
    if matrix:
        diag, basis = _unitary_basis(eps)
        weights = lambda n: basis @ np.diag(diag.conj() ** n) @ basis.conj().T
    else:
        weights = lambda n: eps.conjugate() ** n

    def f(z):
        total = 0
        peak = 0.0
        for n in range(max_terms):
            value = np.asarray(g(np.asarray(z) + n * s), dtype=complex)
            term = value @ weights(n).T if matrix else weights(n) * value
            total = total - term
            size = float(np.max(np.abs(term)))
            peak = max(peak, float(np.max(np.abs(total))))
            if size <= tol * peak or size == 0:
                return complex(total) if np.ndim(total) == 0 else total
        raise Divergent("几何级数在{}项内没有收敛".format(max_terms))

    return f


class PolynomialCocycle(CocycleEvaluator):
    """
    整数权重r ≤ 0时，φ(γ)是次数 ≤ −r 的多项式；在S、T上给定系数，其余γ按上闭链关系在字上展开
    """

    def coefficients(self, gamma: Mat2) -> np.ndarray:
        word = decompose_ST(gamma)
        total = Polynomial([0j])
        suffix = I
        for label in reversed(word):
            entry = self._generator_polynomial(label)
            if entry is not None:
                total = total + Polynomial(polynomial_slash(entry.coef, suffix, self.weight, self.multiplier))
            suffix = WORD_MATRICES[label] * suffix
        coef = np.zeros(self.degree + 1, dtype=complex)
        coef[:len(total.coef)] = total.coef[:self.degree + 1]
        return coef

    def _generator_polynomial(self, label: str) -> Optional[Polynomial]:
        if label == 'S':
            return Polynomial(self.entries['S'])
        if label == 'T':
            return Polynomial(self.entries['T'])
        if label == 'T^-1':
            # φ(T^{-1}) = −φ(T)|T^{-1}
            return -Polynomial(polynomial_slash(self.entries['T'], T.inverse(), self.weight, self.multiplier))
        # φ(−I) = φ(S)|S + φ(S)
        p_s = Polynomial(self.entries['S'])
        return p_s + Polynomial(polynomial_slash(self.entries['S'], S, self.weight, self.multiplier))

    def __call__(self, gamma: Mat2, z):
        return Polynomial(self.coefficients(gamma))(np.asarray(z, dtype=complex)) if np.ndim(z) > 0 else \
            complex(Polynomial(self.coefficients(gamma))(complex(z)))

    def to_dict(self):
        return {"degree": self.degree, "S": [[c.real, c.imag] for c in self.entries['S']],
                "T": [[c.real, c.imag] for c in self.entries['T']], "residual": self.residual}

    def __init__(self, weight: int, multiplier: MultiplierSystem, entries: Dict[str, np.ndarray],
                 residual: float = 0.0):
        self.weight = weight
        self.degree = -int(weight)
        self.multiplier = multiplier
        self.entries = {k: np.asarray(v, dtype=complex) for k, v in entries.items()}
        self.residual = residual


def polynomial_slash(coefficients: Sequence[complex], gamma: Mat2, r, v: MultiplierSystem) -> np.ndarray:
    """
    p|_{r,v}γ = v̄(γ)·Σ p_k (az+b)^k (cz+d)^{D−k}，D = −r
    """
    degree = -int(r)
    a, b, c, d = gamma.floats
    num = Polynomial([b, a])
    den = Polynomial([d, c])
    total = Polynomial([0j])
    for k, p in enumerate(coefficients):
        if p != 0:
            total = total + p * num ** k * den ** (degree - k)
    coef = np.zeros(degree + 1, dtype=complex)
    coef[:len(total.coef)] = total.coef[:degree + 1]
    return v.value(gamma).conjugate() * coef


def polynomial_extract(c: CocycleHandle, gamma: Mat2) -> Tuple[np.ndarray, float]:
    """
    在Im z = 1上的−r+1个Chebyshev节点插值，另取3个点验证
    :return: (按z的升幂排列的系数, 验证点上的最大残差)
    """
    r = c.weight
    if not float(r).is_integer() or float(r) > 0:
        raise ValidationError("多项式提取要求r是非正整数, r={}".format(r))
    degree = -int(r)
    nodes = np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1))
    values = np.array([cocycle_eval(c, gamma, complex(x, 1.0)) for x in nodes])
    fitted = np.linalg.solve(np.vander(nodes, degree + 1, increasing=True).astype(complex), values)
    # p(u)，u = z − i
    polynomial = Polynomial(fitted)(Polynomial([-1j, 1]))
    coef = np.zeros(degree + 1, dtype=complex)
    coef[:len(polynomial.coef)] = polynomial.coef[:degree + 1]
    checks = [complex(0.3, 1.5), complex(-0.45, 0.8), complex(0.1, 2.2)]
    actual = np.array([cocycle_eval(c, gamma, w) for w in checks])
    predicted = Polynomial(coef)(np.array(checks))
    residual = float(np.max(np.abs(actual - predicted)))
    scale = max(1.0, float(np.max(np.abs(values))), float(np.max(np.abs(actual))))
    if residual > 1e-6 * scale:
        raise NotPolynomial("φ({})不是次数≤{}的多项式，残差{}".format(gamma, degree, residual), residual)
    logging.info("提取φ({})的多项式，残差{}".format(gamma.to_list(), residual))
    return coef, residual


def polynomial_cocycle(c: CocycleHandle) -> PolynomialCocycle:
    p_s, res_s = polynomial_extract(c, S)
    p_t, res_t = polynomial_extract(c, T)
    return PolynomialCocycle(int(c.weight), c.multiplier, {'S': p_s, 'T': p_t}, max(res_s, res_t))


class GrowthBound(object):
    """
    |φ(z)| ≤ K(|z|^A + y^{−B})
    """

    def bound(self, z: complex) -> float:
        z = complex(z)
        return self.K * (abs(z) ** self.A + z.imag ** (-self.B))

    def to_dict(self):
        return {"K": self.K, "A": self.A, "B": self.B}

    def __init__(self, K: float, A: float, B: float):
        self.K = K
        self.A = A
        self.B = B


def _fit_exponent(log_x: np.ndarray, log_values: np.ndarray) -> float:
    if len(log_x) < 3 or np.ptp(log_x) == 0:
        return 0.0
    result = sm.OLS(log_values, sm.add_constant(log_x)).fit()
    return max(float(result.params[1]), 0.0)


def fit_growth_bound(phi: CocycleEvaluator, gamma: Mat2, grid: Sequence[complex] = None,
                     margin: float = 0.05) -> GrowthBound:
    """
    在网格上拟合𝒫增长界：y ≥ 1的点对log|z|回归得A，y < 1的点对−log y回归得B
    """
    if grid is None:
        grid = [complex(x, y) for y in np.logspace(-1, 1, 9) for x in (-1.5, 0.0, 1.5)]
    grid = [complex(w) for w in grid]
    values = np.array([float(np.max(np.abs(phi(gamma, w)))) for w in grid])
    logs = np.log(np.maximum(values, 1e-300))
    high = np.array([w.imag >= 1 for w in grid])
    a = _fit_exponent(np.log([abs(w) for w, h in zip(grid, high) if h]), logs[high]) + margin
    b = _fit_exponent(-np.log([w.imag for w, h in zip(grid, high) if not h]), logs[~high]) + margin
    ratios = [v / (abs(w) ** a + w.imag ** (-b)) for w, v in zip(grid, values)]
    return GrowthBound(max(ratios) * (1 + margin), a, b)


def parabolic_witness(phi: CocycleEvaluator, points: Sequence[complex] = (0.1 + 1.2j, -0.3 + 2j, 0.25 + 0.9j)) \
        -> Tuple[Callable, float]:
    """
    找g_∞使φ(σ_∞) = g_∞|σ_∞ − g_∞，σ_∞ = T
    :return: (g_∞, 在探测点上的残差)
    """
    if isinstance(phi, (CocycleHandle, VectorCocycle)):
        shape = () if phi.dimension == 1 else (phi.dimension,)

        def witness(z):
            return np.zeros(np.shape(z) + shape, dtype=complex)

        witness.dimension = phi.dimension
    elif isinstance(phi, Coboundary):
        witness = phi.h
    else:
        witness = one_sided_average_solve(phi.sampler(T), phi.multiplier.value(T), 1.0, 'geometric')
    check = coboundary_apply(witness, T, phi.weight, phi.multiplier)
    residual = max(float(np.max(np.abs(np.asarray(check(z)) - np.asarray(phi(T, z))))) for z in points)
    return witness, residual


class AuxIntegralSampler(object):
    """
    把G包装成可以求值、并带闭式∂G/∂z̄的函数
    """

    def __call__(self, z):
        if np.ndim(z) == 0:
            return self.cocycle.aux(complex(z)).value
        z_arr = np.asarray(z, dtype=complex)
        return np.array([self.cocycle.aux(complex(w)).value for w in z_arr.ravel()]).reshape(z_arr.shape)

    def d_zbar(self, z: complex) -> complex:
        """
        ∂G/∂z̄ = conj(g(z))·(z̄ − z)^{−r}
        """
        z = complex(z)
        value = self.cocycle.g.automorphic(z, self.cocycle.quadrature.min_height)
        return complex(value).conjugate() * cmath.exp(-float(self.cocycle.weight) * cmath.log(-2j * z.imag))

    def __init__(self, cocycle: CocycleHandle):
        self.cocycle = cocycle
        self.dimension = 1
