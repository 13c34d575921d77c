# 该模块解决矩阵、Möbius作用、自守因子、乘子系统以及slash算子的问题
from __future__ import annotations

import cmath
import logging
import math
from enum import Enum
from fractions import Fraction
from typing import *

import mpmath
import numpy as np

from eichler.domain.common import NotSL2Z, ValidationError, ZeroBase, NonIntegerOmega, InconsistentMultiplier, \
    NonUnitary, DimensionMismatch, synchronized

# ω以及乘子的数值提取都在这个参考点上计算
Z0 = 2j
Z1 = 1 / 3 + 1.5j
UNIT_TOL = 1e-10


class _Infinity(object):
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __eq__(self, other):
        return isinstance(other, _Infinity)

    def __hash__(self):
        return hash("INFINITY")


INFINITY = _Infinity()


def _to_exact(x) -> Union[int, Fraction]:
    if isinstance(x, bool):
        raise ValidationError("矩阵元素不能是bool")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return _to_exact(Fraction(x))
    if isinstance(x, (float, np.floating)):
        if float(x).is_integer():
            return int(x)
        raise ValidationError("矩阵元素必须是整数或有理数:{}".format(x))
    if isinstance(x, np.integer):
        return int(x)
    raise ValidationError("无法识别的矩阵元素:{}".format(x))


class Mat2(object):
    """
    SL2(R)中的有理矩阵，行列式严格等于1
    """

    def __init__(self, a, b, c, d):
        self.a = _to_exact(a)
        self.b = _to_exact(b)
        self.c = _to_exact(c)
        self.d = _to_exact(d)
        if self.a * self.d - self.b * self.c != 1:
            raise NotSL2Z("行列式不等于1: {}".format(self.to_list()))
        self._floats = (float(self.a), float(self.b), float(self.c), float(self.d))

    @classmethod
    def from_list(cls, rows) -> Mat2:
        if isinstance(rows, Mat2):
            return rows
        if len(rows) == 4:
            return Mat2(*rows)
        if len(rows) != 2 or len(rows[0]) != 2 or len(rows[1]) != 2:
            raise ValidationError("矩阵格式必须是[[a,b],[c,d]]")
        return Mat2(rows[0][0], rows[0][1], rows[1][0], rows[1][1])

    @property
    def floats(self) -> Tuple[float, float, float, float]:
        return self._floats

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for x in (self.a, self.b, self.c, self.d))

    def key(self) -> Tuple:
        return self.a, self.b, self.c, self.d

    def inverse(self) -> Mat2:
        return Mat2(self.d, -self.b, -self.c, self.a)

    def power(self, n: int) -> Mat2:
        result = I
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            result = result * base
        return result

    def max_entry(self):
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def to_list(self) -> List[List]:
        return [[self.a, self.b], [self.c, self.d]]

    def to_dict(self):
        return self.to_list()

    def __mul__(self, other: Mat2) -> Mat2:
        return Mat2(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                    self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def __neg__(self) -> Mat2:
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __eq__(self, other):
        return isinstance(other, Mat2) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Mat2({})".format(self.to_list())


I = Mat2(1, 0, 0, 1)
MINUS_I = Mat2(-1, 0, 0, -1)
T = Mat2(1, 1, 0, 1)
T_INV = Mat2(1, -1, 0, 1)
S = Mat2(0, 1, -1, 0)
S_INV = Mat2(0, -1, 1, 0)

WORD_MATRICES: Dict[str, Mat2] = {'S': S, 'T': T, 'T^-1': T_INV, '-I': MINUS_I}


def _is_rational_point(z) -> bool:
    return isinstance(z, (int, Fraction)) and not isinstance(z, bool)


def mobius(gamma: Mat2, z):
    """
    γz = (az+b)/(cz+d)，∞和有理尖点用精确运算
    :param gamma:
    :param z: H中的点(可以是numpy数组)、有理数、或者INFINITY
    :return:
    """
    if z is INFINITY:
        if gamma.c == 0:
            return INFINITY
        return Fraction(gamma.a) / Fraction(gamma.c)
    if _is_rational_point(z):
        den = gamma.c * z + gamma.d
        if den == 0:
            return INFINITY
        value = Fraction(gamma.a * z + gamma.b) / Fraction(den)
        return value.numerator if value.denominator == 1 else value
    a, b, c, d = gamma.floats
    if np.ndim(z) == 0:
        z = complex(z)
        den = c * z + d
        if den == 0:
            return INFINITY
        return (a * z + b) / den
    z = np.asarray(z, dtype=complex)
    return (a * z + b) / (c * z + d)


def j_factor(gamma: Mat2, z):
    if _is_rational_point(z):
        return gamma.c * z + gamma.d
    a, b, c, d = gamma.floats
    if np.ndim(z) == 0:
        return c * complex(z) + d
    return c * np.asarray(z, dtype=complex) + d


def principal_arg(w):
    """
    主辐角，取值(−π, π]；负实轴(包括虚部为−0.0的情况)取π
    """
    if np.ndim(w) == 0:
        w = complex(w)
        arg = math.atan2(w.imag, w.real)
        return math.pi if arg <= -math.pi else arg
    arg = np.angle(np.asarray(w, dtype=complex))
    return np.where(arg <= -np.pi, np.pi, arg)


def principal_log(w):
    if np.ndim(w) == 0:
        w = complex(w)
        return complex(math.log(abs(w)), principal_arg(w))
    w = np.asarray(w, dtype=complex)
    return np.log(np.abs(w)) + 1j * principal_arg(w)


def principal_pow(w, r):
    """
    w^r = exp(r·Log w)
    """
    r = complex(r) if isinstance(r, complex) else float(r)
    if np.ndim(w) == 0:
        if complex(w) == 0:
            raise ZeroBase("0不能取复数幂")
        return cmath.exp(r * principal_log(w))
    w = np.asarray(w, dtype=complex)
    if np.any(w == 0):
        raise ZeroBase("0不能取复数幂")
    return np.exp(r * principal_log(w))


def j_pow(gamma: Mat2, z, r):
    j = j_factor(gamma, z)
    if np.ndim(j) == 0 and complex(j) == 0 or np.ndim(j) > 0 and np.any(j == 0):
        raise ZeroBase("j({}, {}) = 0".format(gamma, z))
    return principal_pow(j, r)


def omega(gamma: Mat2, delta: Mat2, z: complex = Z0) -> int:
    value = (-principal_arg(j_factor(gamma * delta, z)) + principal_arg(j_factor(gamma, mobius(delta, z)))
             + principal_arg(j_factor(delta, z))) / (2 * math.pi)
    n = int(round(value))
    if abs(value - n) > 1e-6:
        raise NonIntegerOmega("ω({}, {})在z={}处的值{}不是整数".format(gamma, delta, z, value))
    return n


def sigma_r(gamma: Mat2, delta: Mat2, r) -> complex:
    n = omega(gamma, delta)
    if n == 0:
        return 1 + 0j
    return cmath.exp(2j * math.pi * float(r) * n)


def roelcke_factor(gamma: Mat2, z, r):
    """
    (j(γ,z̄)/j(γ,z))^{r/2}，取arg j(γ,z̄) = −arg j(γ,z)，于是因子为exp(−i·r·arg j(γ,z))
    """
    arg = principal_arg(j_factor(gamma, z))
    if np.ndim(arg) == 0:
        return cmath.exp(-1j * float(r) * arg)
    return np.exp(-1j * float(r) * arg)


class SlashVariant(Enum):
    CLASSIC = 'classic'
    ROELCKE = 'roelcke'


def _as_scalar(z_in, value):
    if np.ndim(z_in) == 0 and np.ndim(value) == 0:
        return complex(value)
    return value


def slash(f: Callable, gamma: Mat2, r, v: MultiplierSystem, variant: Union[str, SlashVariant] = 'classic'):
    """
    f|γ：经典变体 v̄(γ)j(γ,z)^{−r}f(γz)，Roelcke变体用单位模因子替换j^{−r}；向量情形再左乘ρ(γ)^{−1}
    """
    variant = SlashVariant(variant)
    dimension = getattr(f, 'dimension', 1)
    if dimension != v.dimension:
        raise DimensionMismatch("函数维数{}与乘子维数{}不一致".format(dimension, v.dimension))
    v_bar = v.value(gamma).conjugate()
    rho_inv = v.rho(gamma).conj().T if v.dimension > 1 else None

    def sampler(z):
        w = mobius(gamma, z)
        if variant == SlashVariant.CLASSIC:
            factor = v_bar * j_pow(gamma, z, -r)
        else:
            factor = v_bar * roelcke_factor(gamma, z, r)
        value = f(w)
        if rho_inv is not None:
            value = np.asarray(value, dtype=complex) @ rho_inv.T
            return np.asarray(factor)[..., None] * value
        return _as_scalar(z, factor * value)

    sampler.dimension = dimension
    return sampler


def _run_length_word(gamma: Mat2) -> List[Tuple[str, int]]:
    """
    欧几里得算法分解γ，T的幂合并为一个token；−I是中心元，统一放在最前面
    """
    if not gamma.is_integral:
        raise NotSL2Z("矩阵元素不是整数: {}".format(gamma))
    a, b, c, d = gamma.a, gamma.b, gamma.c, gamma.d
    tokens: List[Tuple[str, int]] = []
    minus_count = 0
    while c != 0:
        n = a // c
        if n != 0:
            tokens.append(('T', n))
        a, b = a - n * c, b - n * d
        # M = S^{-1}·(S·M)，S^{-1} = −I·S
        a, b, c, d = c, d, -a, -b
        minus_count += 1
        tokens.append(('S', 1))
    if a == -1:
        minus_count += 1
        b = -b
    if b != 0:
        tokens.append(('T', b))
    if minus_count % 2 == 1:
        tokens.insert(0, ('-I', 1))
    return tokens


def decompose_ST(gamma: Mat2) -> List[str]:
    word = []
    for label, n in _run_length_word(gamma):
        if label == 'T':
            word.extend(['T' if n > 0 else 'T^-1'] * abs(n))
        else:
            word.append(label)
    return word


def word_product(word: Sequence[str]) -> Mat2:
    result = I
    for label in word:
        if label not in WORD_MATRICES:
            raise ValidationError("未知的生成元:{}".format(label))
        result = result * WORD_MATRICES[label]
    return result


class Cusp(object):
    def __init__(self, representative, width, scaling: Mat2, stabilizer: Mat2):
        if representative is not INFINITY and not _is_rational_point(representative):
            raise ValidationError("尖点必须是有理数或INFINITY")
        width = Fraction(width) if not isinstance(width, (int, Fraction)) else width
        if width <= 0:
            raise ValidationError("尖点宽度必须为正")
        translation = scaling * stabilizer * scaling.inverse()
        if translation != Mat2(1, width, 0, 1):
            raise ValidationError("A σ A^-1 = {} 不是宽度{}的平移".format(translation, width))
        if mobius(scaling, representative) != INFINITY:
            raise ValidationError("scaling矩阵没有把尖点{}映到∞".format(representative))
        self.representative = representative
        self.width = width
        self.scaling = scaling
        self.stabilizer = stabilizer

    def to_dict(self):
        rep = {"cusp": "inf"} if self.representative is INFINITY else {"cusp": str(self.representative)}
        return {"representative": rep, "width": str(self.width), "scaling": self.scaling.to_list(),
                "stabilizer": self.stabilizer.to_list()}


class GroupContext(object):
    def __init__(self, name: str, generators: Dict[str, Mat2], cusps: List[Cusp],
                 ford_matrices: List[Mat2] = None):
        if not cusps:
            raise ValidationError("至少需要一个尖点")
        self.name = name
        self.generators = generators
        self.cusps = cusps
        self.ford_matrices = ford_matrices

    @property
    def is_sl2z(self) -> bool:
        return self.name == 'SL2Z'

    def to_dict(self):
        return {"name": self.name, "generators": {k: g.to_list() for k, g in self.generators.items()},
                "cusps": [c.to_dict() for c in self.cusps],
                "ford_matrices": [m.to_list() for m in self.ford_matrices] if self.ford_matrices else None}


def sl2z_context() -> GroupContext:
    return GroupContext('SL2Z', {'S': S, 'T': T}, [Cusp(INFINITY, 1, I, T)])


def _parse_cusp(value):
    if isinstance(value, dict):
        value = value.get("cusp")
    if value in ("inf", "oo", None):
        return INFINITY
    return _to_exact(Fraction(str(value)))


def context_from_dict(data: Dict) -> GroupContext:
    cusps = [Cusp(_parse_cusp(c["representative"]), Fraction(str(c["width"])), Mat2.from_list(c["scaling"]),
                  Mat2.from_list(c["stabilizer"])) for c in data["cusps"]]
    ford = data.get("ford_matrices")
    return GroupContext(data["name"], {k: Mat2.from_list(v) for k, v in data.get("generators", {}).items()}, cusps,
                        [Mat2.from_list(m) for m in ford] if ford else None)


def mp_real(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def eta_log(z: complex, t=1, dps: int = 40):
    """
    log η^t(z) = t·(2πiz/24 + Σ log(1 − q^m))，mpmath高精度
    """
    with mpmath.workdps(dps):
        z = mpmath.mpc(z.real, z.imag)
        q = mpmath.exp(2j * mpmath.pi * z)
        eps = mpmath.mpf(10) ** (-dps - 5)
        total = mpmath.mpc(0)
        qm = q
        while abs(qm) > eps:
            total += mpmath.log(1 - qm)
            qm *= q
        return mp_real(t) * (2j * mpmath.pi * z / 24 + total)


def _eta_generator_value(gamma: Mat2, t, z: complex) -> complex:
    with mpmath.workdps(40):
        w = mobius(gamma, z)
        log_j = mpmath.mpc(principal_log(j_factor(gamma, z)))
        value = mpmath.exp(eta_log(w, t) - eta_log(z, t) - mp_real(t) / 2 * log_j)
        return complex(value)


@synchronized
def _cache_put(cache: Dict, key, value):
    cache[key] = value


class MultiplierSystem(object):
    """
    由生成元S、T上的取值通过σ_r链式法则扩展到整个SL2(Z)；n>1时另带酉表示ρ
    """

    def value(self, gamma: Mat2) -> complex:
        key = gamma.key()
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        value = self._evaluate(_run_length_word(gamma))
        _cache_put(self._cache, key, value)
        return value

    def __call__(self, gamma: Mat2) -> complex:
        return self.value(gamma)

    def _evaluate(self, tokens: List[Tuple[str, int]]) -> complex:
        value = 1 + 0j
        suffix = I
        for label, n in reversed(tokens):
            if label == 'T':
                value *= self.t_value ** n
                suffix = T.power(n) * suffix
            elif label == 'S':
                value *= sigma_r(S, suffix, self.weight) * self.s_value
                suffix = S * suffix
            else:
                value *= sigma_r(MINUS_I, suffix, self.weight) * self.minus_i_value
                suffix = -suffix
        return value

    def chain(self, word: Sequence[str]) -> complex:
        """
        按给定的字(而不是规范分解)用链式法则计算乘子
        """
        tokens = []
        for label in word:
            if label == 'T^-1':
                tokens.append(('T', -1))
            elif label == 'T':
                tokens.append(('T', 1))
            else:
                tokens.append((label, 1))
        return self._evaluate(tokens)

    def rho(self, gamma: Mat2) -> np.ndarray:
        if self.dimension == 1:
            return np.eye(1, dtype=complex)
        result = np.eye(self.dimension, dtype=complex)
        for label, n in _run_length_word(gamma):
            if label == 'T':
                factor = np.linalg.matrix_power(self.rho_t if n > 0 else self.rho_t.conj().T, abs(n))
            elif label == 'S':
                factor = self.rho_s
            else:
                factor = self.rho_s @ self.rho_s
            result = result @ factor
        return result

    @property
    def kappa(self) -> float:
        kappa = (cmath.phase(self.t_value) / (2 * math.pi)) % 1.0
        return 0.0 if kappa > 1 - 1e-12 else kappa

    def cusp_offsets(self, ctx: GroupContext) -> List[float]:
        offsets = []
        for cusp in ctx.cusps:
            kappa = (cmath.phase(self.value(cusp.stabilizer)) / (2 * math.pi)) % 1.0
            offsets.append(0.0 if kappa > 1 - 1e-12 else kappa)
        return offsets

    def conjugate(self, weight=None) -> MultiplierSystem:
        """
        v̄作为权重weight(默认−r)的乘子系统，要求weight ≡ −r (mod 2)
        """
        if weight is None:
            weight = -self.weight
        gap = (float(weight) + float(self.weight)) / 2
        if abs(gap - round(gap)) > 1e-12:
            raise ValidationError("共轭乘子的权重{}与{}不满足模2同余".format(weight, -self.weight))
        return MultiplierSystem(weight, self.s_value.conjugate(), self.t_value.conjugate(), kind='conjugate',
                                dimension=self.dimension,
                                rho_s=None if self.rho_s is None else self.rho_s.conj(),
                                rho_t=None if self.rho_t is None else self.rho_t.conj(),
                                params={'of': self.to_dict()})

    def check_relations(self):
        """
        S^4 = I 与 (ST)^3 = I 两个关系在链式法则下必须给出1
        """
        for word in (['S'] * 4, ['S', 'T'] * 3):
            if word_product(word) != I:
                raise RuntimeError("关系字{}的乘积不是单位矩阵".format(word))
            value = self.chain(word)
            if abs(value - 1) > UNIT_TOL:
                raise InconsistentMultiplier("乘子在关系{}上的取值为{}，不等于1".format("".join(word), value))
        if self.dimension > 1:
            if not np.allclose(np.linalg.matrix_power(self.rho_s, 4), np.eye(self.dimension), atol=UNIT_TOL):
                raise InconsistentMultiplier("ρ(S)^4 ≠ I")
            st = self.rho_s @ self.rho_t
            if not np.allclose(st @ st @ st, np.eye(self.dimension), atol=UNIT_TOL):
                raise InconsistentMultiplier("ρ(ST)^3 ≠ I")

    def to_dict(self):
        dt = {"kind": self.kind, "weight": float(self.weight), "dimension": self.dimension,
              "S": [self.s_value.real, self.s_value.imag], "T": [self.t_value.real, self.t_value.imag]}
        dt.update({k: v for k, v in self.params.items() if k != 'of'})
        return dt

    def __init__(self, weight, s_value: complex, t_value: complex, kind: str = 'generator_table',
                 dimension: int = 1, rho_s: np.ndarray = None, rho_t: np.ndarray = None, params: Dict = None):
        for name, value in (('S', s_value), ('T', t_value)):
            if abs(abs(value) - 1) > UNIT_TOL:
                raise NonUnitary("乘子在{}上的取值{}模长不为1".format(name, value))
        if dimension < 1:
            raise ValidationError("维数必须≥1")
        if dimension > 1:
            if rho_s is None or rho_t is None:
                raise ValidationError("n>1时必须给出ρ(S)与ρ(T)")
            rho_s = np.asarray(rho_s, dtype=complex)
            rho_t = np.asarray(rho_t, dtype=complex)
            for name, m in (('S', rho_s), ('T', rho_t)):
                if m.shape != (dimension, dimension):
                    raise DimensionMismatch("ρ({})的形状{}与维数{}不一致".format(name, m.shape, dimension))
                if not np.allclose(m.conj().T @ m, np.eye(dimension), atol=UNIT_TOL):
                    raise NonUnitary("ρ({})不是酉矩阵".format(name))
        self.weight = weight
        self.kind = kind
        self.dimension = dimension
        self.s_value = complex(s_value)
        self.t_value = complex(t_value)
        # v(−I) = σ_r(S,S)·v(S)^2
        self.minus_i_value = cmath.exp(-2j * math.pi * float(weight)) * self.s_value ** 2
        self.rho_s = rho_s
        self.rho_t = rho_t
        self.params = params if params else {}
        self._cache: Dict[Tuple, complex] = {}


class MultiplierKind(Enum):
    TRIVIAL = 'trivial'
    ETA_POWER = 'eta_power'
    GENERATOR_TABLE = 'generator_table'


def _exact_number(x):
    if isinstance(x, (int, Fraction)):
        return x
    if isinstance(x, str):
        return Fraction(x)
    f = Fraction(x).limit_denominator(10 ** 6)
    return f if abs(float(f) - x) < 1e-15 else float(x)


def make_multiplier(kind: Union[str, MultiplierKind], r, ctx: GroupContext = None, t=None,
                    values: Dict[str, complex] = None, rho: Dict[str, np.ndarray] = None) -> MultiplierSystem:
    """
    构造乘子系统
    :param kind: trivial | eta_power | generator_table
    :param r: 权重
    :param ctx: 群的上下文，目前只支持SL2Z
    :param t: eta_power的幂次
    :param values: generator_table在S、T上的取值
    :param rho: n>1时的表示 {'S': 矩阵, 'T': 矩阵}
    :return:
    """
    kind = MultiplierKind(kind)
    if ctx is not None and not ctx.is_sl2z:
        raise ValidationError("乘子系统目前只在SL2Z上通过生成元构造")
    rho_s = rho_t = None
    dimension = 1
    if rho:
        rho_s = np.asarray(rho['S'], dtype=complex)
        rho_t = np.asarray(rho['T'], dtype=complex)
        dimension = rho_s.shape[0]
    if kind == MultiplierKind.TRIVIAL:
        multiplier = MultiplierSystem(r, 1, 1, kind=kind.value, dimension=dimension, rho_s=rho_s, rho_t=rho_t)
    elif kind == MultiplierKind.ETA_POWER:
        if t is None or float(t) <= 0:
            raise ValidationError("eta_power需要t>0")
        gap = (float(r) - float(t) / 2) / 2
        if abs(gap - round(gap)) > 1e-12:
            raise ValidationError("eta_power({})要求r ≡ t/2 (mod 2), r={}".format(t, r))
        generator_values = {}
        for name, gamma in (('S', S), ('T', T)):
            v0 = _eta_generator_value(gamma, t, Z0)
            v1 = _eta_generator_value(gamma, t, Z1)
            if abs(v0 - v1) > UNIT_TOL:
                raise InconsistentMultiplier("η^{}在{}上两点取值不一致: {} vs {}".format(t, name, v0, v1))
            generator_values[name] = v0
        multiplier = MultiplierSystem(r, generator_values['S'], generator_values['T'], kind=kind.value,
                                      dimension=dimension, rho_s=rho_s, rho_t=rho_t, params={'t': float(t)})
    else:
        if not values or 'S' not in values or 'T' not in values:
            raise ValidationError("generator_table需要给出S和T上的取值")
        multiplier = MultiplierSystem(r, complex(values['S']), complex(values['T']), kind=kind.value,
                                      dimension=dimension, rho_s=rho_s, rho_t=rho_t)
    multiplier.check_relations()
    logging.debug("构造乘子系统成功:{}".format(multiplier.to_dict()))
    return multiplier


def _parse_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def multiplier_from_dict(data: Dict, ctx: GroupContext = None) -> MultiplierSystem:
    kind = data.get("kind", "trivial")
    weight = _exact_number(data.get("weight", 0))
    values = data.get("values")
    if values:
        values = {k: _parse_complex(v) for k, v in values.items()}
    t = data.get("t")
    return make_multiplier(kind, weight, ctx, t=_exact_number(t) if t is not None else None, values=values)


def random_sl2z(rng: np.random.Generator, bound: int = 20, max_length: int = 12) -> Mat2:
    """
    随机的S、T^{±1}字相乘，舍弃元素绝对值超过bound的结果
    """
    while True:
        length = int(rng.integers(1, max_length + 1))
        labels = rng.choice(['S', 'T', 'T^-1', '-I'], size=length, p=[0.4, 0.27, 0.27, 0.06])
        gamma = word_product(list(labels))
        if gamma.max_entry() <= bound:
            return gamma
