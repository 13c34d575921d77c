# 该模块解决权重r的双曲Laplace算子、Maass升降算子、截断Eisenstein级数以及权重平移构造的数值计算问题
from __future__ import annotations

import logging
import math
from configparser import ConfigParser
from typing import *

import numpy as np

from eichler.domain.automorphy import Mat2, MultiplierSystem, I, S, T, sigma_r, principal_arg, slash, \
    make_multiplier
from eichler.domain.common import ValidationError, StencilOutOfDomain, NonSingularCusp, OutsideConvergence, \
    BeanContainer, synchronized

# Richardson外推前后的步长比
_HALF = 0.5


class FDStencil(object):
    """
    中心差分模板，步长随y放大：h·max(1, y)
    一阶导数用h，二阶导数用h2
    """

    def nested(self) -> FDStencil:
        """
        作用在另一个差分结果上的外层模板，一阶导数也用h2
        """
        return FDStencil(self.h2, self.h2, self.order, self.richardson)

    def _reach(self) -> int:
        return 2 if self.order == 4 else 1

    def _scale(self, z: np.ndarray, base: float) -> np.ndarray:
        y = z.imag
        step = base * np.maximum(1.0, y)
        if np.any(y - self._reach() * step <= 0):
            raise StencilOutOfDomain("差分模板在z={}处越出上半平面，步长{}".format(z.ravel()[:3], base))
        return step

    def _first_once(self, F: Callable, z: np.ndarray, direction: complex, step: np.ndarray) -> np.ndarray:
        shift = direction * step
        if self.order == 2:
            return (_sample(F, z + shift) - _sample(F, z - shift)) / (2 * step)
        return (-_sample(F, z + 2 * shift) + 8 * _sample(F, z + shift) - 8 * _sample(F, z - shift)
                + _sample(F, z - 2 * shift)) / (12 * step)

    def _second_once(self, F: Callable, z: np.ndarray, direction: complex, step: np.ndarray) -> np.ndarray:
        shift = direction * step
        center = _sample(F, z)
        if self.order == 2:
            return (_sample(F, z + shift) - 2 * center + _sample(F, z - shift)) / step ** 2
        return (-_sample(F, z + 2 * shift) + 16 * _sample(F, z + shift) - 30 * center + 16 * _sample(F, z - shift)
                - _sample(F, z - 2 * shift)) / (12 * step ** 2)

    def _extrapolate(self, once: Callable, F: Callable, z, direction: complex, base: float):
        z_arr = np.asarray(z, dtype=complex)
        step = self._scale(z_arr, base)
        value = once(F, z_arr, direction, step)
        if self.richardson:
            factor = 2 ** self.order
            value = (factor * once(F, z_arr, direction, step * _HALF) - value) / (factor - 1)
        return complex(value) if np.ndim(z) == 0 else value

    def d_x(self, F: Callable, z):
        return self._extrapolate(self._first_once, F, z, 1.0, self.h)

    def d_y(self, F: Callable, z):
        return self._extrapolate(self._first_once, F, z, 1j, self.h)

    def d_xx(self, F: Callable, z):
        return self._extrapolate(self._second_once, F, z, 1.0, self.h2)

    def d_yy(self, F: Callable, z):
        return self._extrapolate(self._second_once, F, z, 1j, self.h2)

    def d_z(self, F: Callable, z):
        """
        ∂_z = (∂_x − i∂_y)/2
        """
        return (self.d_x(F, z) - 1j * self.d_y(F, z)) / 2

    def d_zbar(self, F: Callable, z):
        """
        ∂_z̄ = (∂_x + i∂_y)/2
        """
        return (self.d_x(F, z) + 1j * self.d_y(F, z)) / 2

    @classmethod
    def from_config(cls, config: ConfigParser, section: str = 'stencil') -> FDStencil:
        if not config.has_section(section):
            return cls()
        sec = config[section]
        return cls(sec.getfloat('h', 1e-4), sec.getfloat('h2', 1e-3), sec.getint('order', 2),
                   sec.getboolean('richardson', True))

    def to_dict(self):
        return {"h": self.h, "h2": self.h2, "order": self.order, "richardson": self.richardson}

    def __init__(self, h: float = 1e-4, h2: float = 1e-3, order: int = 2, richardson: bool = True):
        if not (h > 0 and h2 > 0):
            raise ValidationError("差分步长必须为正: h={}, h2={}".format(h, h2))
        if order not in (2, 4):
            raise ValidationError("差分阶数只能是2或4, 实际为{}".format(order))
        self.h = float(h)
        self.h2 = float(h2)
        self.order = order
        self.richardson = bool(richardson)


class Sampler(object):
    """
    可以在数组上求值的函数，可选地带有闭式的∂_z与∂_z̄
    """

    def __call__(self, z):
        return self.func(z)

    def __init__(self, func: Callable, d_z: Callable = None, d_zbar: Callable = None):
        self.func = func
        self.d_z = d_z
        self.d_zbar = d_zbar


def vectorize(func: Callable) -> Callable:
    """
    把只接受标量的函数包装成可以在数组上逐点求值
    """

    def wrapped(z):
        if np.ndim(z) == 0:
            return complex(func(complex(z)))
        z_arr = np.asarray(z, dtype=complex)
        values = [complex(func(complex(w))) for w in z_arr.ravel()]
        return np.array(values, dtype=complex).reshape(z_arr.shape)

    return wrapped


def _sample(F: Callable, z: np.ndarray) -> np.ndarray:
    return np.asarray(F(z), dtype=complex)


def _stencil(st: Optional[FDStencil]) -> FDStencil:
    return st if st else BeanContainer.get_or_default(FDStencil, FDStencil)


def _closed_form(F: Callable, name: str) -> Optional[Callable]:
    closed = getattr(F, name, None)
    if closed is None:
        return None
    return vectorize(closed) if not isinstance(F, Sampler) else closed


def _partial(F: Callable, z, name: str, st: FDStencil):
    closed = _closed_form(F, name)
    if closed is not None:
        value = closed(z)
        return complex(value) if np.ndim(z) == 0 else np.asarray(value, dtype=complex)
    return getattr(st, name)(F, z)


def _y(z):
    return complex(z).imag if np.ndim(z) == 0 else np.asarray(z, dtype=complex).imag


def _value(F: Callable, z):
    return complex(F(complex(z))) if np.ndim(z) == 0 else _sample(F, np.asarray(z, dtype=complex))


def maass_raise(F: Callable, r, z, st: FDStencil = None):
    """
    K_r F = (z − z̄)∂_z F + (r/2)F
    """
    st = _stencil(st)
    return 2j * _y(z) * _partial(F, z, 'd_z', st) + float(r) / 2 * _value(F, z)


def maass_lower(F: Callable, r, z, st: FDStencil = None):
    """
    Λ_r F = (z − z̄)∂_z̄ F + (r/2)F
    """
    st = _stencil(st)
    return 2j * _y(z) * _partial(F, z, 'd_zbar', st) + float(r) / 2 * _value(F, z)


def laplacian(F: Callable, r, z, st: FDStencil = None):
    """
    Δ_r = −(z − z̄)²∂_z∂_z̄ − (r/2)(z − z̄)(∂_z + ∂_z̄) = y²(∂_x² + ∂_y²) − i·r·y·∂_x
    """
    st = _stencil(st)
    y = _y(z)
    return y ** 2 * (st.d_xx(F, z) + st.d_yy(F, z)) - 1j * float(r) * y * st.d_x(F, z)


def raised_sampler(F: Callable, r, st: FDStencil = None) -> Sampler:
    return Sampler(lambda z: maass_raise(F, r, z, st))


def lowered_sampler(F: Callable, r, st: FDStencil = None) -> Sampler:
    return Sampler(lambda z: maass_lower(F, r, z, st))


def operator_identity_residual(F: Callable, r, z, st: FDStencil = None) -> float:
    """
    |(−Δ_r − (Λ_{r+2}K_r − (r/2)(1 + r/2)))F(z)|，外层差分用较大的步长
    """
    st = _stencil(st)
    r = float(r)
    lhs = -laplacian(F, r, z, st)
    rhs = maass_lower(raised_sampler(F, r, st), r + 2, z, st.nested()) - r / 2 * (1 + r / 2) * _value(F, z)
    return float(np.max(np.abs(lhs - rhs)))


def holomorphic_lift(f: Callable, k) -> Sampler:
    """
    y^{k/2}·f，f全纯；∂_z̄ f = 0，所以闭式∂_z̄(y^{k/2}f) = (i k/4)·y^{k/2−1}·f
    """
    k = float(k)

    def func(z):
        return _y(z) ** (k / 2) * _value(f, z)

    def d_zbar(z):
        y = _y(z)
        return 0.25j * k * y ** (k / 2 - 1) * _value(f, z)

    return Sampler(func, d_zbar=d_zbar)


def bump(center: complex = 2j, radius: float = 0.45, phase: Callable = None) -> Sampler:
    """
    以center为中心、在欧氏半径radius外恒为0的光滑鼓包，乘以可选的光滑因子phase(z)
    """

    def func(z):
        z_arr = np.asarray(z, dtype=complex)
        u = np.abs(z_arr - center) ** 2 / radius ** 2
        inside = u < 1
        values = np.zeros(z_arr.shape, dtype=complex)
        values[inside] = np.exp(-1.0 / (1.0 - u[inside]))
        if phase is not None:
            values = values * np.asarray(phase(z_arr), dtype=complex)
        return complex(values) if np.ndim(z) == 0 else values

    return Sampler(func)


def _egcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _complete(c: int, d: int) -> Mat2:
    """
    补全下行为(c, d)的SL2Z矩阵：a·d − b·c = 1
    """
    g, x, y = _egcd(d, c)
    if g < 0:
        x, y = -x, -y
    return Mat2(x, -y, c, d)


_LATTICE_CACHE: Dict[int, List[Mat2]] = {}


@synchronized
def coprime_lattice(cutoff: int) -> List[Mat2]:
    """
    |c|, |d| ≤ cutoff的所有互素(c, d)，按(c, d)的字典序，连同补全的矩阵
    """
    if cutoff in _LATTICE_CACHE:
        return _LATTICE_CACHE[cutoff]
    matrices = []
    for c in range(-cutoff, cutoff + 1):
        for d in range(-cutoff, cutoff + 1):
            if math.gcd(c, d) == 1:
                matrices.append(_complete(c, d))
    _LATTICE_CACHE[cutoff] = matrices
    logging.debug("构造互素格点成功, cutoff:{}, 数量:{}".format(cutoff, len(matrices)))
    return matrices


class EisensteinLattice(object):
    """
    截断Eisenstein级数求和需要的按项数组：(c, d)以及每项的 σ_r(A,M)^{-1}·conj(v(M))
    """

    def __init__(self, r, v: MultiplierSystem, cutoff: int, scaling: Mat2 = I):
        matrices = coprime_lattice(cutoff)
        self.c = np.array([float(m.c) for m in matrices])
        self.d = np.array([float(m.d) for m in matrices])
        if v.kind == 'trivial' and float(v.weight).is_integer():
            weights = np.ones(len(matrices), dtype=complex)
        else:
            weights = np.array([complex(v.value(m)).conjugate() for m in matrices], dtype=complex)
        if scaling != I:
            weights = weights / np.array([sigma_r(scaling, m, r) for m in matrices], dtype=complex)
        self.weights = weights
        self.matrices = matrices


def _check_eisenstein(v: MultiplierSystem, s: complex):
    if abs(v.value(T) - 1) > 1e-12:
        raise NonSingularCusp("∞对乘子不是奇异尖点: v(T) = {}".format(v.value(T)))
    if not complex(s).real > 1:
        raise OutsideConvergence("Eisenstein级数只在Re s > 1时收敛, s = {}".format(s))


def _eisenstein_sum(lattice: EisensteinLattice, r, z: np.ndarray, s: complex) -> np.ndarray:
    j = lattice.c[:, None] * z[None, :] + lattice.d[:, None]
    height = z.imag[None, :] / np.abs(j) ** 2
    terms = lattice.weights[:, None] * np.exp(-1j * float(r) * principal_arg(j)) * np.exp(s * np.log(height))
    values = np.empty(z.shape, dtype=complex)
    for k in range(z.shape[0]):
        values[k] = 0.5 * complex(math.fsum(terms[:, k].real), math.fsum(terms[:, k].imag))
    return values


def eisenstein_sampler(r, v: MultiplierSystem, s: complex, cutoff: int, scaling: Mat2 = I) -> Sampler:
    """
    截断的Eisenstein级数 z ↦ E_{r,v}(z, s)，在数组上向量化求值
    """
    _check_eisenstein(v, s)
    lattice = EisensteinLattice(r, v, cutoff, scaling)
    s = complex(s)

    def func(z):
        z_arr = np.asarray(z, dtype=complex)
        values = _eisenstein_sum(lattice, r, z_arr.ravel(), s).reshape(z_arr.shape)
        return complex(values) if np.ndim(z) == 0 else values

    return Sampler(func)


def eisenstein_partial(r, v: MultiplierSystem, z: complex, s: complex, cutoff: int, scaling: Mat2 = I) -> complex:
    """
    E_{r,v}(z, s)按|c|, |d| ≤ cutoff截断的部分和，(c, d)与(−c, −d)两项都计入再乘1/2
    :param r: 权重
    :param v: 乘子，要求v(T) = 1
    :param z:
    :param s: 要求Re s > 1
    :param cutoff:
    :param scaling: 尖点的伸缩矩阵A_q，∞处为I
    :return:
    """
    return complex(eisenstein_sampler(r, v, s, cutoff, scaling)(complex(z)))


def weight_shift_G(g: Callable, r, z, st: FDStencil = None):
    """
    𝒢(z) = y^{(r+2)/2}·conj(∂g/∂z̄)；g带闭式∂_z̄(比如辅助积分G)时直接用闭式
    """
    st = _stencil(st)
    y = _y(z)
    return y ** ((float(r) + 2) / 2) * np.conj(_partial(g, z, 'd_zbar', st))


def weight_shift_sampler(g: Callable, r, st: FDStencil = None) -> Sampler:
    return Sampler(lambda z: weight_shift_G(g, r, z, st))


def _shifted_multiplier(v: MultiplierSystem, weight: float,
                        shifted: Callable[[float], MultiplierSystem] = None) -> MultiplierSystem:
    if shifted is not None:
        return shifted(weight)
    if v.kind != 'trivial':
        raise ValidationError("非平凡乘子的升降关系需要给出权重r±2上的乘子")
    return make_multiplier('trivial', weight)


def eisenstein_checks(r, v: MultiplierSystem, s: complex, z: complex, cutoff: int, st: FDStencil = None,
                      shifted: Callable[[float], MultiplierSystem] = None) -> Dict[str, float]:
    """
    截断Eisenstein级数的各项残差：本征方程、升降关系以及S、T下的Roelcke不变性
    :param shifted: 权重 ↦ 该权重上的乘子，用于r±2；平凡乘子可以省略
    """
    st = _stencil(st)
    r = float(r)
    s = complex(s)
    E = eisenstein_sampler(r, v, s, cutoff)
    value = E(z)
    eigen = abs(-laplacian(E, r, z, st) - s * (1 - s) * value)
    upper = eisenstein_sampler(r + 2, _shifted_multiplier(v, r + 2, shifted), s, cutoff)
    lower = eisenstein_sampler(r - 2, _shifted_multiplier(v, r - 2, shifted), s, cutoff)
    raised = abs(maass_raise(E, r, z, st) - (r / 2 + s) * upper(z))
    lowered = abs(maass_lower(E, r, z, st) - (r / 2 - s) * lower(z))
    invariance = {name: abs(complex(slash(E, gamma, r, v, 'roelcke')(z)) - value)
                  for name, gamma in (('S', S), ('T', T))}
    return {"value_abs": abs(value), "eigen": eigen, "raise": raised, "lower": lowered,
            "invariance_S": invariance['S'], "invariance_T": invariance['T']}
