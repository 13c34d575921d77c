# 截断幂级数的运算，用于构造q展开
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Number
from typing import *

import numpy as np

from eichler.domain.common import SeriesOverflow, ValidationError

OVERFLOW_LIMIT = 1e280


def _check(value):
    if isinstance(value, (int, Fraction)):
        return value
    magnitude = abs(value)
    if not math.isfinite(magnitude) or magnitude > OVERFLOW_LIMIT:
        raise SeriesOverflow("幂级数系数溢出:{}".format(value))
    return value


class PowerSeries(object):
    """
    模q^order截断的幂级数，系数可以是int/Fraction(精确)或float/complex
    系数放在Python列表里，精确算术只对列表成立；浮点路径在构造形式时
    经to_numpy转成numpy数组，之后的求值、切片和缩放都在数组上进行
    """

    def __init__(self, coefficients: Sequence, order: int = None):
        if order is None:
            order = len(coefficients)
        if order < 1:
            raise ValidationError("截断阶数必须≥1")
        coefficients = list(coefficients)[:order]
        coefficients += [0] * (order - len(coefficients))
        self.coefficients = [_check(c) for c in coefficients]
        self.order = order

    @classmethod
    def euler_product(cls, order: int) -> PowerSeries:
        """
        Π_{m≥1}(1 − q^m) mod q^order，整数运算
        """
        coefficients = [0] * order
        coefficients[0] = 1
        for m in range(1, order):
            # 乘以(1 − q^m)，从高次往低次原地更新
            for n in range(order - 1, m - 1, -1):
                coefficients[n] -= coefficients[n - m]
        return PowerSeries(coefficients, order)

    def _coerce(self, other) -> PowerSeries:
        if isinstance(other, PowerSeries):
            if other.order != self.order:
                raise ValidationError("截断阶数不一致:{} vs {}".format(self.order, other.order))
            return other
        return PowerSeries([other], self.order)

    def __getitem__(self, n: int):
        return self.coefficients[n]

    def __len__(self):
        return self.order

    def __add__(self, other):
        other = self._coerce(other)
        return PowerSeries([a + b for a, b in zip(self.coefficients, other.coefficients)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries([-a for a in self.coefficients], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if isinstance(other, Number):
            return PowerSeries([other * a for a in self.coefficients], self.order)
        other = self._coerce(other)
        a, b = self.coefficients, other.coefficients
        product = [0] * self.order
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j in range(self.order - i):
                if b[j] != 0:
                    product[i + j] += ai * b[j]
        return PowerSeries(product, self.order)

    __rmul__ = __mul__

    def derivative(self) -> PowerSeries:
        return PowerSeries([n * self.coefficients[n] for n in range(1, self.order)], self.order)

    def integral(self) -> PowerSeries:
        coefficients = [0] * self.order
        for n in range(1, self.order):
            c = self.coefficients[n - 1]
            coefficients[n] = Fraction(c, n) if isinstance(c, (int, Fraction)) else c / n
        return PowerSeries(coefficients, self.order)

    def log(self) -> PowerSeries:
        """
        log f，要求常数项为1：n·L_n = n·f_n − Σ_{k<n} k·L_k·f_{n−k}
        """
        f = self.coefficients
        if f[0] != 1:
            raise ValidationError("log要求常数项为1, 实际为{}".format(f[0]))
        result = [0] * self.order
        for n in range(1, self.order):
            acc = n * f[n]
            for k in range(1, n):
                if result[k] != 0 and f[n - k] != 0:
                    acc -= k * result[k] * f[n - k]
            result[n] = _check(_divide(acc, n))
        return PowerSeries(result, self.order)

    def exp(self) -> PowerSeries:
        """
        exp h，要求常数项为0：n·g_n = Σ_{k≤n} k·h_k·g_{n−k}
        """
        h = self.coefficients
        if h[0] != 0:
            raise ValidationError("exp要求常数项为0, 实际为{}".format(h[0]))
        result = [0] * self.order
        result[0] = 1
        for n in range(1, self.order):
            acc = 0
            for k in range(1, n + 1):
                if h[k] != 0 and result[n - k] != 0:
                    acc += k * h[k] * result[n - k]
            result[n] = _check(_divide(acc, n))
        return PowerSeries(result, self.order)

    def power(self, t) -> PowerSeries:
        if isinstance(t, int) and t >= 0:
            result = PowerSeries([1], self.order)
            base = self
            while t:
                if t & 1:
                    result = result * base
                t >>= 1
                if t:
                    base = base * base
            return result
        return (self.log() * t).exp()

    def to_numpy(self, dtype=complex) -> np.ndarray:
        return np.array([complex(c) if dtype is complex else float(c) for c in self.coefficients], dtype=dtype)


def _divide(value, n: int):
    if isinstance(value, (int, Fraction)):
        return Fraction(value, n) if isinstance(value, int) else value / n
    return value / n
