# 自检：按模块组织的性质与预言机检查，check命令和测试都通过这里运行
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import *

import numpy as np

from eichler.domain.automorphy import Mat2, S, T, omega, sigma_r, j_pow, slash, random_sl2z, make_multiplier, mobius, \
    decompose_ST, word_product
from eichler.domain.common import EichlerError, ValidationError, do_log
from eichler.domain.eichler import CocycleHandle, VectorCocycle, Coboundary, AuxIntegralSampler, polynomial_extract, \
    one_sided_average_solve, FrequencySeries, cocycle_condition_residual, cocycle_eval_direct, fit_growth_bound, \
    parabolic_witness
from eichler.domain.forms import VectorForm, build_delta, build_eta_power
from eichler.domain.fundamental_domain import sl2z_domain, validate_side_pairing, boundary_decomposition, \
    reduce_to_domain, membership
from eichler.domain.pairing import c_constant, pair_cocycle, pair_vector, petersson_direct
from eichler.domain.quadrature import QuadratureSpec
from eichler.domain.spectral import FDStencil, Sampler, holomorphic_lift, laplacian, maass_lower, \
    operator_identity_residual, eisenstein_checks

SEED = 20240611
TIGHT = QuadratureSpec(1e-16, 1e-12)


class CheckResult(object):
    def to_dict(self):
        return {"suite": self.suite, "name": self.name, "passed": self.passed, "detail": self.detail}

    def __init__(self, suite: str, name: str, passed: bool, detail: str):
        self.suite = suite
        self.name = name
        self.passed = bool(passed)
        self.detail = detail


def _within(value: float, limit: float) -> Tuple[bool, str]:
    return value <= limit, "{:.3e} <= {:.1e}".format(value, limit)


def _check_omega() -> Tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    values = set()
    for _ in range(200):
        values.add(omega(random_sl2z(rng), random_sl2z(rng)))
    ok = values <= {-1, 0, 1} and omega(S, S) == -1
    return ok, "ω取值{}，ω(S,S) = {}".format(sorted(values), omega(S, S))


def _check_multiplier_consistency() -> Tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    v = build_eta_power(1).multiplier
    worst = 0.0
    for _ in range(200):
        gamma, delta = random_sl2z(rng), random_sl2z(rng)
        # v(γδ) = σ_r(γ,δ)v(γ)v(δ)
        lhs = v.value(gamma * delta)
        rhs = np.exp(2j * math.pi * float(v.weight) * omega(gamma, delta)) * v.value(gamma) * v.value(delta)
        worst = max(worst, abs(lhs - rhs))
    return _within(worst, 1e-10)


def _check_form_invariance(builder: Callable) -> Callable[[], Tuple[bool, str]]:
    def check():
        form = builder()
        worst = 0.0
        for z in (0.1 + 1.1j, -0.3 + 1.4j, 0.45 + 0.95j):
            for gamma in (S, T):
                value = slash(form, gamma, form.weight, form.multiplier)(z)
                worst = max(worst, abs(value - form(z)) / max(abs(form(z)), 1e-300))
        return _within(worst, 1e-10)

    return check


def _check_side_pairing() -> Tuple[bool, str]:
    return validate_side_pairing(sl2z_domain()), "SL2Z的边配对"


def _check_reduction() -> Tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    failures = 0
    for _ in range(200):
        z = complex(rng.uniform(-5, 5), 10 ** rng.uniform(-3, 1))
        gamma, w = reduce_to_domain(z)
        if not membership(w) or abs(mobius(gamma, z) - w) > 1e-9 * max(1.0, abs(w)):
            failures += 1
    return failures == 0, "{}个点约化失败".format(failures)


def _check_cocycle_condition(builder: Callable) -> Callable[[], Tuple[bool, str]]:
    def check():
        rng = np.random.default_rng(SEED)
        c = CocycleHandle(builder())
        worst = 0.0
        for _ in range(50):
            gamma, delta = random_sl2z(rng, 20), random_sl2z(rng, 20)
            z = complex(rng.uniform(-1, 1), rng.uniform(0.5, 5))
            residual, scale = cocycle_condition_residual(c, gamma, delta, z)
            # 三项模长之和作尺度，γδ = ±Tⁿ时三项都接近0
            worst = max(worst, residual / (1e-7 * scale + 1e-14))
        return _within(worst, 1.0)

    return check


def _check_delta_polynomial() -> Tuple[bool, str]:
    c = CocycleHandle(build_delta())
    _, residual = polynomial_extract(c, S)
    points = (0.2 + 1.1j, -0.4 + 2.0j)
    scale = max([1.0] + [abs(c(S, z)) for z in points])
    t_value = max(abs(c(T, z)) for z in points)
    return residual < 1e-6 * scale and t_value < 1e-7 * scale, "φ(S)残差{:.2e}，|φ(T)|≤{:.2e}".format(residual, t_value)


def _check_one_sided_average() -> Tuple[bool, str]:
    eps = np.exp(0.7j)
    g = FrequencySeries({0.5: 1.0, 1.25: 0.3 - 0.2j})
    f = one_sided_average_solve(g, eps, 1.0, 'fourier')
    grid = [complex(x, 1.0) for x in np.linspace(-1, 1, 20)]
    worst = max(abs(np.conj(eps) * f(z + 1) - f(z) - g(z)) for z in grid)
    return _within(worst, 1e-10)


def _check_c_constant() -> Tuple[bool, str]:
    worst = max(abs(c_constant(0) + 0.5j), abs(c_constant(2) - 2j), abs(c_constant(0.5) - (-0.5 - 0.5j)))
    return _within(worst, 1e-14)


def _one(z):
    return np.ones(np.shape(z), dtype=complex) if np.ndim(z) else 1 + 0j


def _check_coboundary_pairing() -> Tuple[bool, str]:
    f = build_delta()
    result = pair_cocycle(f, Coboundary(_one, -10, make_multiplier('trivial', -10)))
    return abs(result.value) <= 10 * max(result.error_estimate, 1e-18), "|(Δ, d1)| = {:.2e}，误差{:.2e}".format(
        abs(result.value), result.error_estimate)


def _check_duality() -> Tuple[bool, str]:
    f = build_delta()
    q = QuadratureSpec(1e-14, 1e-10)
    pairing = pair_cocycle(f, CocycleHandle(f, q), q=q).value
    direct = petersson_direct(f, f, q=q)
    rel = abs(pairing - direct) / abs(direct)
    return rel < 1e-6, "(Δ,φ_Δ) = {}, (Δ,Δ) = {}, 相对差{:.2e}".format(pairing, direct, rel)


def _check_holomorphic_eigenfunction() -> Tuple[bool, str]:
    delta = build_delta()
    F = holomorphic_lift(delta, 12)
    plain = Sampler(F.func)
    z = 0.1 + 1.1j
    ratio = -laplacian(plain, 12, z, FDStencil()) / F(z)
    annihilated = abs(maass_lower(plain, 12, z, FDStencil()))
    ok = abs(ratio + 30) < 30e-4 and annihilated < 1e-6
    return ok, "−Δ/F = {}, |Λ F| = {:.2e}".format(ratio, annihilated)


def _check_operator_identity() -> Tuple[bool, str]:
    F = Sampler(lambda z: np.asarray(z).imag ** (1 / 3) * np.cos(np.asarray(z).real))
    z = 0.3 + 1.2j
    residual = operator_identity_residual(F, 0.5, z)
    return _within(residual / abs(F(z)), 1e-4)


def _check_eisenstein() -> Tuple[bool, str]:
    v = make_multiplier('trivial', 0)
    rows = [eisenstein_checks(0, v, 2, 2j, cutoff) for cutoff in (8, 16, 32, 64)]
    scale = rows[-1]["value_abs"]
    local = max(max(row["eigen"], row["raise"], row["lower"], row["invariance_S"]) for row in rows)
    decay = all(b["invariance_T"] * 2 <= a["invariance_T"] for a, b in zip(rows[:-1], rows[1:]))
    return local <= 1e-6 * scale and decay, "局部残差{:.2e}，T残差{}".format(
        local, ["{:.2e}".format(row["invariance_T"]) for row in rows])


def _check_sigma_cocycle() -> Tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        gamma, delta = random_sl2z(rng), random_sl2z(rng)
        z = complex(rng.uniform(-3, 3), rng.uniform(0.5, 5))
        r = rng.uniform(-12, 12)
        # σ_r(γ,δ)j(γδ,z)^r = j(γ,δz)^r j(δ,z)^r
        lhs = sigma_r(gamma, delta, r) * j_pow(gamma * delta, z, r)
        rhs = j_pow(gamma, mobius(delta, z), r) * j_pow(delta, z, r)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    return _within(worst, 1e-10)


def _shifted_exponential(z):
    z = np.asarray(z)
    return np.exp(1j * z) * (z + 3j)


def _check_slash_composition() -> Tuple[bool, str]:
    r = 1.5
    v = make_multiplier('eta_power', r, t=3)
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        gamma, delta = random_sl2z(rng, 8), random_sl2z(rng, 8)
        z = complex(rng.uniform(-1, 1), rng.uniform(0.5, 2))
        once = slash(_shifted_exponential, gamma * delta, r, v)(z)
        twice = slash(slash(_shifted_exponential, gamma, r, v), delta, r, v)(z)
        worst = max(worst, abs(once - twice) / max(1.0, abs(once)))
    return _within(worst, 1e-10)


def _check_roelcke_bridge() -> Tuple[bool, str]:
    r = 1.5
    v = make_multiplier('eta_power', r, t=3)

    def lifted(z):
        return np.asarray(z).imag ** (r / 2) * _shifted_exponential(z)

    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        gamma = random_sl2z(rng)
        z = complex(rng.uniform(-1, 1), rng.uniform(0.5, 2))
        roelcke = slash(lifted, gamma, r, v, 'roelcke')(z)
        classic = z.imag ** (r / 2) * slash(_shifted_exponential, gamma, r, v)(z)
        worst = max(worst, abs(roelcke - classic) / max(1.0, abs(classic)))
    return _within(worst, 1e-10)


def _check_word_roundtrip() -> Tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    failures = 0
    for _ in range(1000):
        gamma = random_sl2z(rng)
        if word_product(decompose_ST(gamma)) != gamma:
            failures += 1
    return failures == 0, "{}个矩阵分解后无法还原".format(failures)


def _check_cusp_decay() -> Tuple[bool, str]:
    """
    y = 10处 f(z)e^{−iβz} 应等于首项系数
    """
    worst = 0.0
    z = 0.3 + 10j
    for form in (build_delta(), build_eta_power(1), build_eta_power(3), build_eta_power(26)):
        _, a, beta = next(form.nonzero_terms())
        leading = a * np.exp(1j * beta * z)
        worst = max(worst, abs(form(z) - leading) / abs(leading))
    return _within(worst, 1e-10)


def _check_boundary_decomposition() -> Tuple[bool, str]:
    pairs = boundary_decomposition(sl2z_domain())
    return pairs == [(0, 3), (1, 2)], "代表边及其像: {}".format(pairs)


def _check_holomorphy_residual(builder: Callable) -> Callable[[], Tuple[bool, str]]:
    def check():
        sampler = AuxIntegralSampler(CocycleHandle(builder(), TIGHT))
        rng = np.random.default_rng(SEED)
        stencil = FDStencil()
        worst = 0.0
        for _ in range(10):
            z = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 2.0))
            closed = sampler.d_zbar(z)
            worst = max(worst, abs(closed - stencil.d_zbar(sampler, z)) / abs(closed))
        return _within(worst, 1e-6)

    return check


def _check_growth_bound() -> Tuple[bool, str]:
    c = CocycleHandle(build_delta())
    grid = [complex(x, y) for y in np.logspace(-1, 1, 9) for x in (-1.5, 0.0, 1.5)]
    bound = fit_growth_bound(c, S, grid)
    violations = [w for w in grid if abs(c(S, w)) > bound.bound(w)]
    finite = all(math.isfinite(value) for value in (bound.K, bound.A, bound.B))
    return finite and not violations, "K={:.3e}, A={:.2f}, B={:.2f}, 越界点{}".format(
        bound.K, bound.A, bound.B, violations)


def _check_parabolic_witness() -> Tuple[bool, str]:
    _, residual = parabolic_witness(CocycleHandle(build_delta()))
    return _within(residual, 1e-8)


def _check_direct_agreement(builder: Callable) -> Callable[[], Tuple[bool, str]]:
    def check():
        c = CocycleHandle(builder(), TIGHT)
        z = -0.1 + 1.4j
        worst = 0.0
        for gamma in (S, S * T, Mat2(2, 1, 1, 1)):
            reduced = c(gamma, z)
            worst = max(worst, abs(reduced - cocycle_eval_direct(c, gamma, z)) / abs(reduced))
        return _within(worst, 1e-7)

    return check


def _check_duality_eta(t: int) -> Callable[[], Tuple[bool, str]]:
    def check():
        f = build_eta_power(t)
        pairing = pair_cocycle(f, CocycleHandle(f)).value
        direct = petersson_direct(f, f)
        rel = abs(pairing - direct) / abs(direct)
        return rel < 1e-6 and direct.real > 0, "(η^{t},φ) = {p}, (η^{t},η^{t}) = {d}, 相对差{rel:.2e}".format(
            t=t, p=pairing, d=direct, rel=rel)

    return check


def _check_sesquilinearity() -> Tuple[bool, str]:
    f = build_delta()
    a = 2 - 1j
    g = f.scaled(a)
    forward = petersson_direct(f, g)
    backward = petersson_direct(g, f)
    norm = petersson_direct(f, f)
    symmetry = abs(forward - np.conj(backward)) / abs(forward)
    linearity = abs(backward - a * norm) / abs(backward)
    return symmetry < 1e-8 and linearity < 1e-8, "共轭对称{:.2e}，线性{:.2e}".format(symmetry, linearity)


def _check_vector_pairing() -> Tuple[bool, str]:
    delta = build_delta()
    q = QuadratureSpec(1e-14, 1e-10)
    v = make_multiplier('trivial', 12, rho={'S': np.eye(2), 'T': np.eye(2)})
    vector = VectorForm([delta, delta], v)
    value = pair_vector(vector, VectorCocycle(vector, q), q=q).value
    scalar = pair_cocycle(delta, CocycleHandle(delta, q), q=q).value
    return _within(abs(value - 2 * scalar) / abs(2 * scalar), 1e-8)


def _check_stencil_richardson() -> Tuple[bool, str]:
    """
    F = y^{1/3}cos x 的闭式导数对照，Richardson外推的误差不应超过单步差分
    """
    F = Sampler(lambda z: np.asarray(z).imag ** (1 / 3) * np.cos(np.asarray(z).real))
    z = 0.3 + 1.2j
    x, y = z.real, z.imag
    exact = {
        'd_x': -y ** (1 / 3) * math.sin(x),
        'd_y': y ** (-2 / 3) * math.cos(x) / 3,
        'd_xx': -y ** (1 / 3) * math.cos(x),
        'd_yy': -2 / 9 * y ** (-5 / 3) * math.cos(x),
    }
    refined, plain = FDStencil(), FDStencil(richardson=False)
    ok = True
    details = []
    for name, value in exact.items():
        refined_error = abs(getattr(refined, name)(F, z) - value) / abs(value)
        plain_error = abs(getattr(plain, name)(F, z) - value) / abs(value)
        limit = 1e-8 if name in ('d_x', 'd_y') else 1e-6
        ok = ok and refined_error <= max(plain_error, 1e-12) and refined_error <= limit
        details.append("{}: {:.1e}/{:.1e}".format(name, refined_error, plain_error))
    return ok, ", ".join(details)


SUITES: Dict[str, List[Tuple[str, Callable[[], Tuple[bool, str]]]]] = {
    "automorphy": [("omega_range", _check_omega), ("multiplier_consistency", _check_multiplier_consistency),
                   ("sigma_cocycle", _check_sigma_cocycle), ("slash_composition", _check_slash_composition),
                   ("roelcke_bridge", _check_roelcke_bridge), ("word_roundtrip", _check_word_roundtrip)],
    "forms": [("delta_invariance", _check_form_invariance(build_delta)),
              ("eta_invariance", _check_form_invariance(lambda: build_eta_power(1))),
              ("cusp_decay", _check_cusp_decay)],
    "domain": [("side_pairing", _check_side_pairing), ("boundary_decomposition", _check_boundary_decomposition),
               ("reduction", _check_reduction)],
    "eichler": [("cocycle_condition_delta", _check_cocycle_condition(build_delta)),
                ("cocycle_condition_eta", _check_cocycle_condition(lambda: build_eta_power(1))),
                ("holomorphy_delta", _check_holomorphy_residual(build_delta)),
                ("holomorphy_eta", _check_holomorphy_residual(lambda: build_eta_power(1))),
                ("direct_agreement_delta", _check_direct_agreement(build_delta)),
                ("direct_agreement_eta", _check_direct_agreement(lambda: build_eta_power(1))),
                ("growth_bound", _check_growth_bound), ("parabolic_witness", _check_parabolic_witness),
                ("delta_period_polynomial", _check_delta_polynomial),
                ("one_sided_average", _check_one_sided_average)],
    "pairing": [("c_constant", _check_c_constant), ("coboundary_invariance", _check_coboundary_pairing),
                ("duality_delta", _check_duality), ("duality_eta", _check_duality_eta(1)),
                ("duality_eta3", _check_duality_eta(3)), ("duality_eta26", _check_duality_eta(26)),
                ("sesquilinearity", _check_sesquilinearity), ("vector_pairing", _check_vector_pairing)],
    "spectral": [("holomorphic_eigenfunction", _check_holomorphic_eigenfunction),
                 ("operator_identity", _check_operator_identity), ("stencil_richardson", _check_stencil_richardson),
                 ("eisenstein", _check_eisenstein)],
}


def _run_one(suite: str, name: str, check: Callable) -> CheckResult:
    try:
        passed, detail = check()
    except (EichlerError, ArithmeticError, ValueError) as e:
        logging.error("检查{}.{}出现异常:{}".format(suite, name, e))
        return CheckResult(suite, name, False, "{}: {}".format(type(e).__name__, e))
    logging.info("检查{}.{}: {}, {}".format(suite, name, "通过" if passed else "失败", detail))
    return CheckResult(suite, name, passed, detail)


@do_log(target_name='run_suites')
def run_suites(suite: str = 'all', workers: int = 4) -> List[CheckResult]:
    """
    在线程池中并行运行检查，结果按声明顺序返回
    """
    if suite == 'all':
        names = list(SUITES.keys())
    elif suite in SUITES:
        names = [suite]
    else:
        raise ValidationError("未知的检查套件:{}".format(suite))
    tasks = [(s, name, check) for s in names for name, check in SUITES[s]]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        futures = [executor.submit(_run_one, s, name, check) for s, name, check in tasks]
        return [f.result() for f in futures]
