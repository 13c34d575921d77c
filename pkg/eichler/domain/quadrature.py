# 该模块解决一维自适应复值积分的问题，所有路径积分、射线积分都通过这里
from __future__ import annotations

import heapq
import math
from configparser import ConfigParser
from enum import Enum
from typing import *

import mpmath
import numpy as np

from eichler.domain.common import ValidationError, ToleranceNotMet

EPS = np.finfo(float).eps

# Gauss–Kronrod 7/15 节点(非负一半)和权重
XGK = np.array([0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                0.207784955007898467600689403773245, 0.0])
WGK = np.array([0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
# Gauss 7点规则的权重，对应XGK[1], XGK[3], XGK[5], XGK[7]
WG = np.array([0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
               0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

_NODES = np.concatenate([-XGK[:-1], XGK[::-1]])
_K_WEIGHTS = np.concatenate([WGK[:-1], WGK[::-1]])
_G_WEIGHTS = np.zeros(15)
for _i, _w in zip((1, 3, 5, 7), WG):
    _G_WEIGHTS[_i] = _w
    _G_WEIGHTS[14 - _i] = _w


class TailMode(Enum):
    ANALYTIC = 'analytic'
    DOUBLING = 'doubling'


class QuadratureSpec(object):
    """
    所有积分共用的精度控制
    """

    def tightened(self, factor: float = 2.0) -> QuadratureSpec:
        return QuadratureSpec(self.abs_tol / factor, self.rel_tol / factor, self.max_subdivisions * 2, self.height,
                              self.tail_mode.value, self.min_height, self.initial_panels)

    def with_height(self, height: float) -> QuadratureSpec:
        return QuadratureSpec(self.abs_tol, self.rel_tol, self.max_subdivisions, height, self.tail_mode.value,
                              self.min_height, self.initial_panels)

    @classmethod
    def from_config(cls, config: ConfigParser, section: str = 'quadrature') -> QuadratureSpec:
        if not config.has_section(section):
            return cls()
        sec = config[section]
        return cls(sec.getfloat('abs_tol', 1e-10), sec.getfloat('rel_tol', 1e-9),
                   sec.getint('max_subdivisions', 2000), sec.getfloat('height', 12.0),
                   sec.get('tail_mode', 'analytic'), sec.getfloat('min_height', 0.5),
                   sec.getint('initial_panels', 4))

    def to_dict(self):
        return {"abs_tol": self.abs_tol, "rel_tol": self.rel_tol, "max_subdivisions": self.max_subdivisions,
                "height": self.height, "tail_mode": self.tail_mode.value, "min_height": self.min_height,
                "initial_panels": self.initial_panels}

    def __init__(self, abs_tol: float = 1e-10, rel_tol: float = 1e-9, max_subdivisions: int = 2000,
                 height: float = 12.0, tail_mode: str = 'analytic', min_height: float = 0.5,
                 initial_panels: int = 4):
        if not (abs_tol > 0 and rel_tol > 0):
            raise ValidationError("abs_tol和rel_tol必须为正: {}, {}".format(abs_tol, rel_tol))
        if height < 2:
            raise ValidationError("截断高度Y必须≥2, 实际为{}".format(height))
        if max_subdivisions < 1 or initial_panels < 1:
            raise ValidationError("max_subdivisions与initial_panels必须为正")
        if not (0 < min_height <= 1):
            raise ValidationError("min_height必须在(0,1]中")
        try:
            self.tail_mode = TailMode(tail_mode)
        except ValueError:
            raise ValidationError("未知的tail_mode:{}".format(tail_mode))
        self.abs_tol = float(abs_tol)
        self.rel_tol = float(rel_tol)
        self.max_subdivisions = int(max_subdivisions)
        self.height = float(height)
        self.min_height = float(min_height)
        self.initial_panels = int(initial_panels)


class Estimate(object):
    def to_dict(self):
        return {"value": [self.value.real, self.value.imag], "error": self.error, "panels": self.panels,
                "evaluations": self.evaluations}

    def __add__(self, other: Estimate) -> Estimate:
        return Estimate(self.value + other.value, self.error + other.error, self.panels + other.panels,
                        self.evaluations + other.evaluations)

    def __init__(self, value: complex, error: float, panels: int = 0, evaluations: int = 0):
        self.value = complex(value)
        self.error = float(error)
        self.panels = panels
        self.evaluations = evaluations


def _csum(values) -> complex:
    values = np.asarray(values, dtype=complex)
    return complex(math.fsum(values.real), math.fsum(values.imag))


def _panel(f: Callable, a: float, b: float) -> Tuple[complex, float, float]:
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    values = np.asarray(f(center + half * _NODES), dtype=complex)
    if not np.all(np.isfinite(values)):
        raise ToleranceNotMet("被积函数在[{}, {}]上出现非有限值".format(a, b))
    kronrod = half * _csum(_K_WEIGHTS * values)
    gauss = half * _csum(_G_WEIGHTS * values)
    resabs = abs(half) * math.fsum(_K_WEIGHTS * np.abs(values))
    return kronrod, abs(kronrod - gauss), resabs


def integrate(f: Callable, a: float, b: float, spec: QuadratureSpec = None, scale: float = 0.0) -> Estimate:
    """
    全局自适应的Gauss–Kronrod二分积分，总是优先细分误差最大的子区间
    :param f: 向量化的被积函数，输入实数数组，输出复数数组
    :param a:
    :param b:
    :param spec:
    :param scale: 相对误差参照的量级，积分值本身很小的时候用调用方给出的scale
    :return:
    """
    spec = spec if spec else QuadratureSpec()
    if a == b:
        return Estimate(0, 0, 0, 0)
    heap = []
    counter = 0
    edges = np.linspace(a, b, spec.initial_panels + 1)
    panels: Dict[int, Tuple[float, float, complex, float, float]] = {}
    for left, right in zip(edges[:-1], edges[1:]):
        value, err, resabs = _panel(f, left, right)
        panels[counter] = (left, right, value, err, resabs)
        heapq.heappush(heap, (-err, counter))
        counter += 1
    evaluations = 15 * len(panels)
    while True:
        total = _csum([p[2] for p in panels.values()])
        err_total = math.fsum(p[3] for p in panels.values())
        resabs_total = math.fsum(p[4] for p in panels.values())
        floor = 50 * EPS * resabs_total
        if err_total <= max(spec.abs_tol, spec.rel_tol * max(abs(total), scale)) or err_total <= floor:
            return Estimate(total, err_total + floor, len(panels), evaluations)
        if len(panels) >= spec.max_subdivisions:
            raise ToleranceNotMet("积分[{}, {}]在{}个子区间后误差{}仍未达到要求".format(a, b, len(panels), err_total),
                                  total, err_total)
        _, idx = heapq.heappop(heap)
        left, right, _, _, _ = panels.pop(idx)
        mid = 0.5 * (left + right)
        for lo, hi in ((left, mid), (mid, right)):
            value, err, resabs = _panel(f, lo, hi)
            panels[counter] = (lo, hi, value, err, resabs)
            heapq.heappush(heap, (-err, counter))
            counter += 1
        evaluations += 30


def integrate_semi_infinite(f: Callable, a: float, rate: float, spec: QuadratureSpec = None,
                            scale: float = 0.0) -> Estimate:
    """
    ∫_a^∞ f(t)dt，f按e^{−rate·t}衰减；在衰减到1e-18以下处截断，端点处还不可忽略时加倍截断长度
    """
    spec = spec if spec else QuadratureSpec()
    if not rate > 0:
        raise ValidationError("衰减率必须为正: {}".format(rate))
    length = 41.4 / rate
    for _ in range(8):
        b = a + length
        endpoint = abs(complex(np.asarray(f(np.array([b])), dtype=complex)[0])) / rate
        if endpoint <= max(spec.abs_tol, spec.rel_tol * scale) * 1e-3:
            break
        length *= 2
    estimate = integrate(f, a, b, spec, scale)
    estimate.error += endpoint
    return estimate


def integrate_path(f: Callable, geodesic, spec: QuadratureSpec = None, scale: float = 0.0) -> Estimate:
    """
    ∫ f(z)dz 沿测地线段，z = p(u)，u ∈ [0,1]
    """

    def integrand(u):
        return f(geodesic.point(u)) * geodesic.derivative(u)

    return integrate(integrand, 0.0, 1.0, spec, scale)


def upper_gamma_scaled(a: float, x: float, log_scale: float = 0.0) -> float:
    """
    e^{log_scale}·Γ(a, x)，a可以是任意实数
    """
    with mpmath.workdps(30):
        value = mpmath.exp(log_scale) * mpmath.gammainc(a, x)
        return float(value)


def log_upper_gamma(a: float, x: float) -> float:
    with mpmath.workdps(30):
        value = mpmath.gammainc(a, x)
        if value <= 0:
            return -math.inf
        return float(mpmath.log(value))
