# 该模块解决由Fourier展开表示的实权模形式的构造与求值问题
from __future__ import annotations

import logging
import math
import re
from abc import ABCMeta, abstractmethod
from fractions import Fraction
from typing import *

import numpy as np
import pandas as pd

from eichler.domain.automorphy import MultiplierSystem, make_multiplier, j_pow, multiplier_from_dict, \
    sl2z_context
from eichler.domain.common import ValidationError, TailTooLarge, DimensionMismatch, SeriesOverflow
from eichler.domain.series import PowerSeries

DEFAULT_TRUNCATION = 64


class TailBound(metaclass=ABCMeta):
    """
    对被截掉的项 Σ_{n>N} |a_n| e^{−2π(n+κ)y/λ} 的上界
    """

    @abstractmethod
    def bound(self, y: float, truncation: int, kappa: float, width: float) -> float:
        pass

    @abstractmethod
    def to_dict(self):
        pass

    def scaled(self, factor: float) -> TailBound:
        return ScaledTail(self, factor)


class PolynomialTail(TailBound):
    """
    |a_n| ≤ M·n^c
    """

    def bound(self, y: float, truncation: int, kappa: float, width: float) -> float:
        x = math.exp(-2 * math.pi * y / width)
        n = truncation + 1
        ratio = ((n + 1) / n) ** self.c * x
        if ratio >= 1:
            return math.inf
        return self.M * n ** self.c * x ** (n + kappa) / (1 - ratio)

    def to_dict(self):
        return {"kind": "polynomial", "M": self.M, "c": self.c}

    def __init__(self, M: float, c: float):
        if M <= 0:
            raise ValidationError("尾部常数M必须为正")
        self.M = M
        self.c = c


class EulerMajorantTail(TailBound):
    """
    Π(1−q^m)^t 的系数被 Π(1−q^m)^{−t} 的系数控制，在 |q| = √x 上用Cauchy估计
    """

    def bound(self, y: float, truncation: int, kappa: float, width: float) -> float:
        # 在对数空间里算，y很大时x会下溢成0
        log_x = -2 * math.pi * y / width
        log_rho = 0.5 * log_x
        rho = math.exp(log_rho)
        log_majorant = 0.0
        rho_m = rho
        while rho_m > 1e-18:
            log_majorant -= math.log1p(-rho_m)
            rho_m *= rho
        log_bound = abs(self.t) * log_majorant + kappa * log_x + (self.shift + truncation + 1) * log_rho \
                    - math.log1p(-rho)
        return math.exp(log_bound) if log_bound > -745 else 0.0

    def to_dict(self):
        return {"kind": "euler_majorant", "t": self.t, "shift": self.shift}

    def __init__(self, t: float, shift: int):
        self.t = float(t)
        self.shift = shift


class ScaledTail(TailBound):
    def bound(self, y: float, truncation: int, kappa: float, width: float) -> float:
        return self.factor * self.inner.bound(y, truncation, kappa, width)

    def to_dict(self):
        return {"kind": "scaled", "factor": self.factor, "of": self.inner.to_dict()}

    def __init__(self, inner: TailBound, factor: float):
        self.inner = inner
        self.factor = abs(factor)


class FourierForm(object):
    """
    f(z) = Σ a_n exp(2πi(n+κ)z/λ)，系数截断到n = N，尾部由TailBound控制
    """
    dimension = 1

    def __call__(self, z):
        """
        直接对截断级数求值(向量化)，不做模约化
        """
        z_arr = np.asarray(z, dtype=complex)
        if self._nonzero.size == 0:
            value = np.zeros(z_arr.shape, dtype=complex)
        else:
            phase = np.exp(2j * np.pi * np.multiply.outer(z_arr, self._exponents))
            value = phase @ self._active
        if np.ndim(z) == 0:
            return complex(value)
        return value

    def tail_bound(self, y: float) -> float:
        return self.tail.bound(float(y), self.truncation, self.kappa_float, self.width)

    def automorphic(self, z, min_height: float = 0.5):
        """
        H上任意点求值：低于min_height的点先约化到基本域，再用 f(z) = v̄(γ)j(γ,z)^{−k}f(γz)
        """
        from eichler.domain.fundamental_domain import reduce_to_domain
        if np.ndim(z) == 0:
            z = complex(z)
            if z.imag >= min_height:
                return self(z)
            gamma, w = reduce_to_domain(z)
            return self.multiplier.value(gamma).conjugate() * j_pow(gamma, z, -self.weight) * self(w)
        z_arr = np.asarray(z, dtype=complex)
        flat = z_arr.ravel()
        out = np.empty(flat.shape, dtype=complex)
        high = flat.imag >= min_height
        if np.any(high):
            out[high] = self(flat[high])
        for idx in np.nonzero(~high)[0]:
            out[idx] = self.automorphic(complex(flat[idx]), min_height)
        return out.reshape(z_arr.shape)

    @property
    def leading_index(self) -> Optional[int]:
        if self._nonzero.size == 0:
            return None
        return int(self._nonzero[0])

    @property
    def decay_rate(self) -> float:
        """
        主导项的指数衰减率 2π(n0+κ)/λ
        """
        n0 = self.leading_index
        if n0 is None:
            return math.inf
        return 2 * math.pi * (n0 + self.kappa_float) / self.width

    @property
    def is_zero(self) -> bool:
        return self._nonzero.size == 0

    def nonzero_terms(self) -> Iterator[Tuple[int, complex, float]]:
        """
        :return: (n, a_n, β_n)，β_n = 2π(n+κ)/λ，按n递增
        """
        for n, a, e in zip(self._nonzero, self._active, self._exponents):
            yield int(n), complex(a), 2 * math.pi * float(e)

    @classmethod
    def zero(cls, weight, multiplier: MultiplierSystem, truncation: int = 1, kappa=0) -> FourierForm:
        return cls(weight, multiplier, np.zeros(truncation + 1, dtype=complex), kappa, 1, PolynomialTail(1, 0),
                   cusp_form=True, label="zero")

    def scaled(self, factor: complex) -> FourierForm:
        return FourierForm(self.weight, self.multiplier, self.coefficients * factor, self.kappa, self.width,
                           self.tail.scaled(abs(factor)), self.cusp_form, self.cusp_index,
                           label="{}*{}".format(factor, self.label))

    def to_dict(self):
        return {"label": self.label, "weight": float(self.weight), "kappa": str(self.kappa), "width": self.width,
                "N": self.truncation, "cusp_form": self.cusp_form, "multiplier": self.multiplier.to_dict(),
                "tail": self.tail.to_dict()}

    def __init__(self, weight, multiplier: MultiplierSystem, coefficients: Sequence[complex], kappa=0,
                 width: float = 1, tail: TailBound = None, cusp_form: bool = False, cusp_index: int = 0,
                 label: str = None, modular: bool = True):
        coefficients = np.asarray(coefficients, dtype=complex)
        if coefficients.ndim != 1 or coefficients.size < 1:
            raise ValidationError("系数必须是非空的一维数组")
        if not np.all(np.isfinite(coefficients)):
            raise SeriesOverflow("系数中存在非有限值")
        if not (0 <= kappa < 1):
            raise ValidationError("κ必须在[0,1)中, 实际为{}".format(kappa))
        if width <= 0:
            raise ValidationError("尖点宽度必须为正")
        if multiplier.dimension != 1:
            raise DimensionMismatch("标量形式需要一维乘子")
        nonzero = np.nonzero(coefficients)[0]
        kappa_float = float(kappa)
        if cusp_form and any(n + kappa_float <= 0 for n in nonzero):
            raise ValidationError("尖形式要求n+κ≤0的系数为0")
        if modular and nonzero.size > 0:
            if weight < 0:
                raise ValidationError("负权重的非零模形式不存在, weight={}".format(weight))
            if weight == 0 and any(n + kappa_float != 0 for n in nonzero):
                raise ValidationError("权重0的模形式只能是常数")
        if nonzero.size > 0 and abs((multiplier.kappa - kappa_float + 0.5) % 1.0 - 0.5) > 1e-9:
            raise ValidationError("乘子的κ={}与展开的κ={}不一致".format(multiplier.kappa, kappa_float))
        self.weight = weight
        self.multiplier = multiplier
        self.coefficients = coefficients
        self.kappa = kappa
        self.kappa_float = kappa_float
        self.width = float(width)
        self.truncation = coefficients.size - 1
        self.tail = tail if tail else PolynomialTail(max(1.0, float(np.max(np.abs(coefficients)))), 6)
        self.cusp_form = cusp_form
        self.cusp_index = cusp_index
        self.label = label if label else "form"
        self._nonzero = nonzero
        self._active = coefficients[nonzero]
        self._exponents = (nonzero + kappa_float) / self.width


class VectorForm(object):
    """
    向量值形式，分量各自是FourierForm，整体的变换规则由乘子的ρ给出
    """

    def __call__(self, z):
        return np.stack([np.asarray(c(z)) for c in self.components], axis=-1)

    def automorphic(self, z, min_height: float = 0.5):
        return np.stack([np.asarray(c.automorphic(z, min_height)) for c in self.components], axis=-1)

    def to_dict(self):
        return {"dimension": self.dimension, "weight": float(self.weight),
                "components": [c.to_dict() for c in self.components]}

    def __init__(self, components: List[FourierForm], multiplier: MultiplierSystem):
        if len(components) != multiplier.dimension:
            raise DimensionMismatch("分量个数{}与乘子维数{}不一致".format(len(components), multiplier.dimension))
        weights = {float(c.weight) for c in components}
        if len(weights) != 1:
            raise ValidationError("向量形式的各分量权重必须一致")
        self.components = components
        self.multiplier = multiplier
        self.weight = components[0].weight
        self.dimension = multiplier.dimension


def eval_form(f: FourierForm, z: complex, tol: float = None) -> Tuple[complex, float]:
    """
    截断和加上尾部的绝对误差界
    :param f:
    :param z:
    :param tol: 调用方能接受的误差，超过则抛TailTooLarge
    :return: (value, bound)
    """
    z = complex(z)
    if z.imag <= 0:
        raise ValidationError("z必须在上半平面:{}".format(z))
    bound = f.tail_bound(z.imag)
    if tol is not None and bound > tol:
        raise TailTooLarge("在z={}处尾部误差{}超过了容差{}，需要增大N或者y".format(z, bound, tol))
    return f(z), bound


def build_delta(N: int = DEFAULT_TRUNCATION) -> FourierForm:
    if N < 1:
        raise ValidationError("N必须≥1")
    # Δ = q·Π(1−q^m)^24
    p24 = PowerSeries.euler_product(N).power(24)
    coefficients = [0] + [p24[n] for n in range(N)]
    multiplier = make_multiplier('trivial', 12, sl2z_context())
    logging.debug("构造Δ, N={}".format(N))
    return FourierForm(12, multiplier, np.array(coefficients, dtype=float), 0, 1, PolynomialTail(2, 6),
                       cusp_form=True, label="delta")


def _exact(t):
    if isinstance(t, (int, Fraction)):
        return t.numerator if isinstance(t, Fraction) and t.denominator == 1 else t
    if isinstance(t, str):
        return _exact(Fraction(t))
    f = Fraction(t).limit_denominator(10 ** 6)
    if abs(float(f) - t) < 1e-15:
        return _exact(f)
    return float(t)


def build_eta_power(t, N: int = DEFAULT_TRUNCATION) -> FourierForm:
    """
    η^t = q^{t/24}·exp(t·Σ log(1−q^m))
    :param t: 正实数，有理时κ精确保存为Fraction
    :param N:
    :return:
    """
    t = _exact(t)
    if t <= 0:
        raise ValidationError("t必须为正")
    if N < 1:
        raise ValidationError("N必须≥1")
    if isinstance(t, float):
        shift = math.floor(t / 24)
        kappa = t / 24 - shift
    else:
        ratio = Fraction(t) / 24
        shift = math.floor(ratio)
        kappa = ratio - shift
        kappa = kappa.numerator if kappa.denominator == 1 else kappa
    coefficients = np.zeros(N + 1, dtype=complex)
    order = N + 1 - shift
    if order > 0:
        series = PowerSeries.euler_product(order).power(t)
        try:
            values = series.to_numpy()
        except OverflowError:
            raise SeriesOverflow("η^{}的系数在N={}时超出浮点范围".format(t, N))
        if not np.all(np.isfinite(values)) or np.max(np.abs(values)) > 1e280:
            raise SeriesOverflow("η^{}的系数在N={}时溢出".format(t, N))
        coefficients[shift:] = values
    weight = Fraction(t) / 2 if not isinstance(t, float) else t / 2
    weight = weight.numerator if isinstance(weight, Fraction) and weight.denominator == 1 else weight
    multiplier = make_multiplier('eta_power', weight, sl2z_context(), t=t)
    logging.debug("构造η^{}, N={}, κ={}".format(t, N, kappa))
    return FourierForm(weight, multiplier, coefficients, kappa, 1, EulerMajorantTail(t, shift), cusp_form=True,
                       label="eta^{}".format(t))


_ETA_PATTERN = re.compile(r'^eta(\d+)?$')


def form_from_descriptor(descriptor: Union[str, Dict], truncation: int = DEFAULT_TRUNCATION) -> FourierForm:
    """
    {"form":"delta","N":64}、{"form":"eta_power","t":1,"N":128}，或者简写 delta / eta / eta3 / eta26
    """
    if isinstance(descriptor, str):
        name = descriptor.strip().lower()
        if name == 'delta':
            return build_delta(truncation)
        matched = _ETA_PATTERN.match(name)
        if matched:
            return build_eta_power(int(matched.group(1)) if matched.group(1) else 1, truncation)
        raise ValidationError("未知的形式描述:{}".format(descriptor))
    kind = descriptor.get("form")
    n = int(descriptor.get("N", truncation))
    if kind == 'delta':
        return build_delta(n)
    if kind == 'eta_power':
        return build_eta_power(descriptor.get("t", 1), n)
    if kind == 'coefficients':
        multiplier_data = {"kind": "trivial"}
        multiplier_data.update(descriptor.get("multiplier", {}))
        multiplier_data.setdefault("weight", descriptor["weight"])
        multiplier = multiplier_from_dict(multiplier_data)
        coefficients = [complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
                        for c in descriptor["coefficients"]]
        tail = descriptor.get("tail")
        return FourierForm(_exact(descriptor["weight"]), multiplier, coefficients,
                           _exact(descriptor.get("kappa", 0)), descriptor.get("width", 1),
                           PolynomialTail(tail["M"], tail["c"]) if tail else None,
                           cusp_form=descriptor.get("cusp_form", True), label=descriptor.get("label", "user"))
    raise ValidationError("未知的形式类型:{}".format(kind))


def coefficients_frame(f: FourierForm) -> pd.DataFrame:
    return pd.DataFrame({"n": np.arange(f.truncation + 1), "re": f.coefficients.real, "im": f.coefficients.imag})


def export_coefficients(f: FourierForm, path: str):
    coefficients_frame(f).to_csv(path, index=False, float_format='%.17g')
    logging.info("系数已导出到{}".format(path))
