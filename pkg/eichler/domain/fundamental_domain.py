# 该模块解决边配对的基本域、Ford域、边的参数化以及点的约化问题
from __future__ import annotations

import cmath
import logging
import math
from fractions import Fraction
from typing import *

import numpy as np

from eichler.domain.automorphy import Mat2, INFINITY, mobius, j_factor, GroupContext, T, S, S_INV, T_INV, I, \
    sl2z_context
from eichler.domain.common import UnsupportedGroup, NoConvergence, DomainValidationError, ValidationError

RHO = cmath.exp(2j * math.pi / 3)
MAX_REDUCTION_STEPS = 10 ** 4
GEOMETRY_TOL = 1e-12


class BoundaryVertex(object):
    def __init__(self, location, cusp_index: int = None):
        if location is not INFINITY and not isinstance(location, (int, Fraction)):
            location = complex(location)
            if location.imag <= 0:
                raise ValidationError("有限顶点必须在上半平面:{}".format(location))
        self.location = location
        self.cusp_index = cusp_index

    @property
    def is_cusp(self) -> bool:
        return not isinstance(self.location, complex)

    def to_dict(self):
        if self.location is INFINITY:
            return {"cusp": "inf"}
        if self.is_cusp:
            return {"cusp": str(self.location)}
        return [self.location.real, self.location.imag]


class Geodesic(object):
    """
    两个有限点之间的测地线段，u ∈ [0,1]；竖直线段按高度线性参数化，圆弧按角度参数化
    """

    def point(self, u):
        u = np.asarray(u, dtype=float)
        if self.vertical:
            return self.start.real + 1j * (self.start.imag + u * (self.end.imag - self.start.imag))
        theta = self.theta_start + u * (self.theta_end - self.theta_start)
        return self.center + self.radius * np.exp(1j * theta)

    def derivative(self, u):
        u = np.asarray(u, dtype=float)
        if self.vertical:
            return np.full(u.shape, 1j * (self.end.imag - self.start.imag), dtype=complex)
        theta = self.theta_start + u * (self.theta_end - self.theta_start)
        return 1j * self.radius * np.exp(1j * theta) * (self.theta_end - self.theta_start)

    def distance(self, w) -> float:
        """
        点到这条测地线所在的完整测地线(竖直线或半圆)的欧氏偏差
        """
        w = complex(w)
        if self.vertical:
            return abs(w.real - self.start.real)
        return abs(abs(w - self.center) - self.radius)

    def __init__(self, start: complex, end: complex):
        self.start = complex(start)
        self.end = complex(end)
        self.vertical = abs(self.start.real - self.end.real) < GEOMETRY_TOL
        if not self.vertical:
            # 圆心在实轴上，到两端点距离相等
            x1, y1, x2, y2 = self.start.real, self.start.imag, self.end.real, self.end.imag
            self.center = ((x2 ** 2 + y2 ** 2) - (x1 ** 2 + y1 ** 2)) / (2 * (x2 - x1))
            self.radius = abs(self.start - self.center)
            self.theta_start = cmath.phase(self.start - self.center)
            self.theta_end = cmath.phase(self.end - self.center)


class Edge(object):
    def truncated(self, height: float) -> Geodesic:
        """
        把∞端点换成该竖直线上高度为height的点
        """
        start, end = self.start.location, self.end.location
        if start is INFINITY:
            return Geodesic(complex(end.real, height), end)
        if end is INFINITY:
            return Geodesic(start, complex(start.real, height))
        if self.start.is_cusp or self.end.is_cusp:
            raise UnsupportedGroup("暂不支持通向有理尖点的边")
        return Geodesic(start, end)

    @property
    def touches_infinity(self) -> bool:
        return self.start.location is INFINITY or self.end.location is INFINITY

    def geodesic(self) -> Geodesic:
        """
        用于几何检验的测地线；含∞的边取一段有限的竖直线段
        """
        if self.touches_infinity:
            finite = self.end.location if self.start.location is INFINITY else self.start.location
            return self.truncated(finite.imag + 1.0)
        return self.truncated(0)

    def to_dict(self, index_of: Callable[[BoundaryVertex], int]):
        return {"start": index_of(self.start), "end": index_of(self.end), "pairing": self.pairing.to_list(),
                "partner": self.partner}

    def __init__(self, start: BoundaryVertex, end: BoundaryVertex, pairing: Mat2, partner: int):
        self.start = start
        self.end = end
        self.pairing = pairing
        self.partner = partner


class FundamentalDomain(object):
    def representative_edges(self) -> List[Edge]:
        return [self.edges[i] for i in self.representatives]

    def to_dict(self):
        index_of = lambda v: self.vertices.index(v)
        return {"vertices": [v.to_dict() for v in self.vertices],
                "edges": [e.to_dict(index_of) for e in self.edges],
                "representatives": list(self.representatives)}

    def __init__(self, vertices: List[BoundaryVertex], edges: List[Edge], representatives: List[int],
                 ctx: GroupContext = None):
        self.vertices = vertices
        self.edges = edges
        self.representatives = representatives
        self.ctx = ctx if ctx else sl2z_context()


def sl2z_domain() -> FundamentalDomain:
    """
    A1 = ∞, A2 = e^{2πi/3}, A3 = i, A4 = A2 + 1；边按A1→A2→A3→A4→A1的顺序
    """
    vertices = [BoundaryVertex(INFINITY, 0), BoundaryVertex(RHO), BoundaryVertex(1j), BoundaryVertex(RHO + 1)]
    edges = [Edge(vertices[0], vertices[1], T, 3),
             Edge(vertices[1], vertices[2], S, 2),
             Edge(vertices[2], vertices[3], S_INV, 1),
             Edge(vertices[3], vertices[0], T_INV, 0)]
    return FundamentalDomain(vertices, edges, [0, 1], sl2z_context())


def _parse_vertex(value) -> BoundaryVertex:
    if isinstance(value, dict):
        cusp = value.get("cusp")
        if cusp == "inf":
            return BoundaryVertex(INFINITY)
        f = Fraction(str(cusp))
        return BoundaryVertex(f.numerator if f.denominator == 1 else f)
    return BoundaryVertex(complex(float(value[0]), float(value[1])))


def domain_from_dict(data: Dict, ctx: GroupContext = None) -> FundamentalDomain:
    vertices = [_parse_vertex(v) for v in data["vertices"]]
    edges = [Edge(vertices[e["start"]], vertices[e["end"]], Mat2.from_list(e["pairing"]), int(e["partner"]))
             for e in data["edges"]]
    domain = FundamentalDomain(vertices, edges, [int(i) for i in data["representatives"]], ctx)
    validate_side_pairing(domain)
    return domain


def domain_to_dict(domain: FundamentalDomain) -> Dict:
    return domain.to_dict()


def _same_point(p, q) -> bool:
    if p is INFINITY or q is INFINITY:
        return p is INFINITY and q is INFINITY
    if isinstance(p, (int, Fraction)) and isinstance(q, (int, Fraction)):
        return p == q
    if isinstance(p, (int, Fraction)) or isinstance(q, (int, Fraction)):
        return abs(complex(p) - complex(q)) < GEOMETRY_TOL and complex(p).imag == complex(q).imag == 0
    return abs(p - q) < GEOMETRY_TOL


def validate_side_pairing(domain: FundamentalDomain) -> bool:
    """
    检查边配对的四个条件：τ是无不动点的对合、α_i把端点映到配对边的端点、α_τ(i) = α_i^{-1}、α_i把边映到配对边的测地线上
    """
    violations = []
    edges = domain.edges
    n = len(edges)
    if n % 2 != 0:
        violations.append("边数{}不是偶数".format(n))
    for i, e in enumerate(edges):
        if not (0 <= e.partner < n):
            violations.append("边{}的配对边{}不存在".format(i, e.partner))
            continue
        partner = edges[e.partner]
        if e.partner == i:
            violations.append("τ在{}处有不动点".format(i))
        if partner.partner != i:
            violations.append("τ不是对合: τ(τ({})) = {}".format(i, partner.partner))
        if not _same_point(mobius(e.pairing, e.start.location), partner.end.location):
            violations.append("α_{} A_{} ≠ A_(τ+1)".format(i, i))
        if not _same_point(mobius(e.pairing, e.end.location), partner.start.location):
            violations.append("α_{} A_({}+1) ≠ A_τ".format(i, i))
        if partner.pairing != e.pairing.inverse():
            violations.append("α_τ({}) ≠ α_{}^-1".format(i, i))
        geodesic = e.geodesic()
        target = partner.geodesic()
        for u in np.linspace(0.05, 0.95, 7):
            w = mobius(e.pairing, complex(geodesic.point(u)))
            if target.distance(w) > GEOMETRY_TOL:
                violations.append("α_{}没有把边映到配对边的测地线上(偏差{})".format(i, target.distance(w)))
                break
    orbits = set()
    for i in domain.representatives:
        if not (0 <= i < n):
            violations.append("代表边{}不存在".format(i))
            continue
        orbit = frozenset((i, edges[i].partner))
        if orbit in orbits:
            violations.append("代表边{}与其他代表边同属一个τ轨道".format(i))
        orbits.add(orbit)
    if len(orbits) * 2 != n:
        violations.append("代表边没有覆盖所有τ轨道")
    if violations:
        raise DomainValidationError(violations)
    logging.debug("side pairing检验通过")
    return True


def boundary_decomposition(domain: FundamentalDomain, samples: int = 9) -> List[Tuple[int, int]]:
    """
    ∂F = ⊔(代表边 ⊔ 它的α像)：检查代表边和它们的像恰好覆盖所有边
    """
    covered = []
    for i in domain.representatives:
        e = domain.edges[i]
        partner = domain.edges[e.partner]
        geodesic = e.geodesic()
        target = partner.geodesic()
        for u in np.linspace(0.1, 0.9, samples):
            w = mobius(e.pairing, complex(geodesic.point(u)))
            if target.distance(w) > GEOMETRY_TOL:
                raise DomainValidationError(["代表边{}的像不在边{}上".format(i, e.partner)])
        covered.extend([i, e.partner])
    if sorted(covered) != list(range(len(domain.edges))):
        raise DomainValidationError(["代表边及其像没有恰好覆盖所有边: {}".format(sorted(covered))])
    return [(i, domain.edges[i].partner) for i in domain.representatives]


def edge_path(e: Edge, u: float, kappa: float = 1.0):
    """
    边上的点：有限边直接按测地线参数化；从∞出发的边用 Im = Y0·e^{κ(1−u)/u}，通向∞的边用 Im = Y0·e^{κu/(1−u)}
    """
    if not 0 <= u <= 1:
        raise ValidationError("u必须在[0,1]中")
    start, end = e.start.location, e.end.location
    if start is INFINITY:
        if u == 0:
            return INFINITY
        return complex(end.real, end.imag * math.exp(kappa * (1 - u) / u))
    if end is INFINITY:
        if u == 1:
            return INFINITY
        return complex(start.real, start.imag * math.exp(kappa * u / (1 - u)))
    return complex(e.geodesic().point(u))


def membership(z: complex, ctx: GroupContext = None, eps: float = GEOMETRY_TOL) -> bool:
    """
    闭Ford域：SL2Z为 |Re z| ≤ 1/2 且 |z| ≥ 1；一般的群需要给出Ford矩阵列表
    """
    z = complex(z)
    if z.imag <= 0:
        raise ValidationError("z必须在上半平面:{}".format(z))
    if ctx is None or ctx.is_sl2z:
        return abs(z.real) <= 0.5 + eps and abs(z) >= 1 - eps
    if not ctx.ford_matrices:
        raise UnsupportedGroup("群{}没有给出Ford矩阵列表".format(ctx.name))
    width = float(ctx.cusps[0].width)
    if abs(z.real) > width / 2 + eps:
        return False
    return all(abs(j_factor(gamma, z)) >= 1 - eps for gamma in ctx.ford_matrices)


def reduce_to_domain(z: complex) -> Tuple[Mat2, complex]:
    """
    交替做平移和反演，把z约化到SL2Z的基本域
    :return: (γ, w) 且 w = γz
    """
    w = complex(z)
    if w.imag <= 0:
        raise ValidationError("z必须在上半平面:{}".format(z))
    gamma = I
    for _ in range(MAX_REDUCTION_STEPS):
        n = math.floor(w.real + 0.5)
        if n != 0:
            w = w - n
            gamma = Mat2(1, -n, 0, 1) * gamma
        if abs(w) < 1 - 1e-15:
            # S w = −1/w
            w = -1 / w
            gamma = S * gamma
            continue
        return gamma, w
    raise NoConvergence("约化{}在{}步内没有收敛".format(z, MAX_REDUCTION_STEPS))
