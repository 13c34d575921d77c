# 命令行入口：解析参数、合并配置、调用领域函数并以JSON输出结果
import argparse
import json
import logging
import sys
from configparser import ConfigParser
from typing import *

import numpy as np

from eichler.domain.automorphy import Mat2, decompose_ST, word_product, make_multiplier
from eichler.domain.common import EichlerError, ValidationError, ToleranceNotMet, do_log, BeanContainer
from eichler.domain.eichler import CocycleHandle, cocycle_estimate, cocycle_eval_direct, aux_integral
from eichler.domain.forms import form_from_descriptor, export_coefficients, coefficients_frame, build_delta, \
    DEFAULT_TRUNCATION
from eichler.domain.pairing import pair_cocycle, petersson_estimate
from eichler.domain.quadrature import QuadratureSpec
from eichler.domain.spectral import FDStencil, Sampler, eisenstein_checks, eisenstein_partial, holomorphic_lift, \
    laplacian, maass_lower, operator_identity_residual
from eichler.infras import initialize
from eichler.infras.codec import dumps, parse_complex, write_grid, write_report
from eichler.service.checks import run_suites

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_VALIDATION = 2
EXIT_TOLERANCE = 3

# 可以由--config文件或者命令行覆盖的积分精度参数
QUADRATURE_KEYS = ['abs_tol', 'rel_tol', 'max_subdivisions', 'height', 'tail_mode', 'min_height', 'initial_panels']


def _add_quadrature_options(parser: argparse.ArgumentParser):
    parser.add_argument('--config', dest='config', default=None, help='JSON配置文件，合并在命令行参数之下')
    parser.add_argument('--abs-tol', dest='abs_tol', type=float, default=None)
    parser.add_argument('--rel-tol', dest='rel_tol', type=float, default=None)
    parser.add_argument('--max-subdivisions', dest='max_subdivisions', type=int, default=None)
    parser.add_argument('--height', dest='height', type=float, default=None)
    parser.add_argument('--tail-mode', dest='tail_mode', choices=['analytic', 'doubling'], default=None)
    parser.add_argument('--min-height', dest='min_height', type=float, default=None)
    parser.add_argument('--initial-panels', dest='initial_panels', type=int, default=None)
    parser.add_argument('--truncation', dest='truncation', type=int, default=None, help='q展开的项数')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='eichler', description='Eichler上闭链、配对与谱算子的数值计算')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('pair', help='(f, φ_g)与Petersson内积(f, g)的对比')
    p.add_argument('--f', dest='f', default=None)
    p.add_argument('--g', dest='g', default=None)
    _add_quadrature_options(p)

    p = sub.add_parser('petersson', help='二维积分计算Petersson内积')
    p.add_argument('--f', dest='f', default=None)
    p.add_argument('--g', dest='g', default=None)
    p.add_argument('--dump-grid', dest='dump_grid', default=None)
    _add_quadrature_options(p)

    p = sub.add_parser('cocycle', help='φ_g(γ)(z)')
    p.add_argument('--g', dest='g', default=None)
    p.add_argument('--gamma', dest='gamma', default=None, help='a,b,c,d')
    p.add_argument('--z', dest='z', default=None, help='x,y')
    p.add_argument('--direct', dest='direct', action='store_true', default=None)
    _add_quadrature_options(p)

    p = sub.add_parser('aux', help='辅助积分G(z)')
    p.add_argument('--g', dest='g', default=None)
    p.add_argument('--z', dest='z', default=None)
    p.add_argument('--path', dest='path', choices=['vertical', 'kinked'], default=None)
    p.add_argument('--dump-grid', dest='dump_grid', default=None)
    _add_quadrature_options(p)

    p = sub.add_parser('eisenstein', help='截断的Eisenstein级数及其残差')
    p.add_argument('--r', dest='r', type=float, default=None)
    p.add_argument('--s', dest='s', default=None)
    p.add_argument('--z', dest='z', default=None)
    p.add_argument('--cutoff', dest='cutoff', type=int, default=None)
    p.add_argument('--config', dest='config', default=None)

    p = sub.add_parser('decompose', help='γ分解为S、T的字')
    p.add_argument('--gamma', dest='gamma', default=None)
    p.add_argument('--config', dest='config', default=None)

    p = sub.add_parser('check', help='运行自检套件')
    p.add_argument('--suite', dest='suite', default=None)
    p.add_argument('--workers', dest='workers', type=int, default=None)
    p.add_argument('--report', dest='report', default=None)
    p.add_argument('--config', dest='config', default=None)

    p = sub.add_parser('laplacian-check', help='Laplace算子与Maass算子的恒等式')
    p.add_argument('--which', dest='which', choices=['eigen', 'lower', 'identity'], default=None)
    p.add_argument('--r', dest='r', type=float, default=None)
    p.add_argument('--z', dest='z', default=None)
    p.add_argument('--config', dest='config', default=None)

    p = sub.add_parser('coefficients', help='导出q展开系数')
    p.add_argument('--f', dest='f', default=None)
    p.add_argument('--out', dest='out', default=None)
    _add_quadrature_options(p)
    return parser


# 各命令参数的默认值，配置文件与命令行都没有给出时使用
DEFAULTS = {
    'pair': {'f': 'delta', 'g': None},
    'petersson': {'f': 'delta', 'g': None, 'dump_grid': None},
    'cocycle': {'g': 'delta', 'gamma': '0,1,-1,0', 'z': '0,1', 'direct': False},
    'aux': {'g': 'delta', 'z': '0,1', 'path': 'vertical', 'dump_grid': None},
    'eisenstein': {'r': 0.0, 's': 2.0, 'z': '0,2', 'cutoff': 64},
    'decompose': {'gamma': '0,1,-1,0'},
    'check': {'suite': 'all', 'workers': None, 'report': None},
    'laplacian-check': {'which': 'eigen', 'r': None, 'z': '0.1,1.1'},
    'coefficients': {'f': 'delta', 'out': None},
}


def _load_json_config(path: str) -> Dict:
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError("无法读取配置文件{}: {}".format(path, e))
    if not isinstance(data, dict):
        raise ValidationError("配置文件必须是JSON对象: {}".format(path))
    return data


def resolve_options(args: argparse.Namespace) -> Dict:
    """
    合并顺序：命令默认值 < --config文件 < 命令行参数；配置文件中的未知键直接拒绝
    """
    known = set(vars(args).keys()) - {'command', 'config'}
    file_values = _load_json_config(args.config) if args.config else {}
    unknown = sorted(set(file_values.keys()) - known - {'command'})
    if unknown:
        raise ValidationError("配置中有未知的键: {}".format(unknown))
    if 'command' in file_values and file_values['command'] != args.command:
        raise ValidationError("配置文件的command为{}，与命令行的{}不一致".format(file_values['command'], args.command))
    options = dict(DEFAULTS.get(args.command, {}))
    options.update(file_values)
    options.update({k: v for k, v in vars(args).items() if v is not None and k in known})
    return options


def _quadrature(options: Dict) -> QuadratureSpec:
    base = BeanContainer.get_or_default(QuadratureSpec, QuadratureSpec).to_dict()
    base.update({k: options[k] for k in QUADRATURE_KEYS if options.get(k) is not None})
    return QuadratureSpec(**base)


def _truncation(options: Dict, config: ConfigParser) -> int:
    if options.get('truncation') is not None:
        return int(options['truncation'])
    return config.getint('forms', 'truncation', fallback=DEFAULT_TRUNCATION)


def _descriptor(value):
    if isinstance(value, str) and value.strip().startswith('{'):
        try:
            return json.loads(value)
        except json.JSONDecodeError as e:
            raise ValidationError("形式描述不是合法的JSON: {}".format(e))
    return value


def _form(value, truncation: int):
    return form_from_descriptor(_descriptor(value), truncation)


def _matrix(value) -> Mat2:
    if isinstance(value, (list, tuple)):
        entries = [int(x) for x in np.ravel(value)]
    else:
        try:
            entries = [int(p) for p in str(value).split(',')]
        except ValueError:
            raise ValidationError("矩阵的格式为a,b,c,d: {}".format(value))
    if len(entries) != 4:
        raise ValidationError("矩阵需要4个元素: {}".format(value))
    return Mat2(*entries)


def _metadata(q: QuadratureSpec, truncation: int = None) -> Dict:
    meta = {"quadrature": q.to_dict()}
    if truncation is not None:
        meta["truncation"] = truncation
    return meta


def cmd_pair(options: Dict, config: ConfigParser) -> Tuple[Dict, int]:
    q = _quadrature(options)
    n = _truncation(options, config)
    f = _form(options['f'], n)
    g = _form(options['g'], n) if options.get('g') else f
    result = pair_cocycle(f, CocycleHandle(g, q), q=q)
    direct = petersson_estimate(f, g, q=q)
    rel_diff = abs(result.value - direct.value) / max(abs(direct.value), 1e-300)
    return {"pair": result.value, "error_estimate": result.error_estimate, "petersson": direct.value,
            "petersson_error": direct.error, "rel_diff": rel_diff, "per_edge": result.per_edge,
            "truncation_height": result.truncation_height, "tail_bound": result.tail_bound,
            "flags": result.flags, "metadata": _metadata(q, n)}, EXIT_OK


def _domain_grid(nx: int = 11, ny: int = 12, top: float = 4.0) -> List[complex]:
    points = []
    for x in np.linspace(-0.5, 0.5, nx):
        floor = float(np.sqrt(max(1 - x * x, 0.0)))
        for y in np.linspace(floor, top, ny):
            points.append(complex(x, y))
    return points


def cmd_petersson(options: Dict, config: ConfigParser) -> Tuple[Dict, int]:
    q = _quadrature(options)
    n = _truncation(options, config)
    f = _form(options['f'], n)
    g = _form(options['g'], n) if options.get('g') else f
    estimate = petersson_estimate(f, g, q=q)
    if options.get('dump_grid'):
        r = 2 - float(f.weight)
        samples = [(z, complex(f(z)) * complex(g(z)).conjugate() * z.imag ** (-r)) for z in _domain_grid()]
        write_grid(samples, options['dump_grid'])
    return {"petersson": estimate.value, "error": estimate.error, "panels": estimate.panels,
            "metadata": _metadata(q, n)}, EXIT_OK


def cmd_cocycle(options: Dict, config: ConfigParser) -> Tuple[Dict, int]:
    q = _quadrature(options)
    n = _truncation(options, config)
    c = CocycleHandle(_form(options['g'], n), q)
    gamma = _matrix(options['gamma'])
    z = parse_complex(options['z'])
    estimate = cocycle_estimate(c, gamma, z)
    payload = {"gamma": gamma.to_list(), "z": z, "value": estimate.value, "error": estimate.error,
               "weight": float(c.weight), "metadata": _metadata(q, n)}
    if options.get('direct'):
        payload["direct"] = cocycle_eval_direct(c, gamma, z)
    return payload, EXIT_OK


def cmd_aux(options: Dict, config: ConfigParser) -> Tuple[Dict, int]:
    q = _quadrature(options)
    n = _truncation(options, config)
    g = _form(options['g'], n)
    r = 2 - g.weight
    z = parse_complex(options['z'])
    estimate = aux_integral(g, r, z, q, options.get('path', 'vertical'))
    if options.get('dump_grid'):
        samples = [(w, aux_integral(g, r, w, q).value) for w in _domain_grid(7, 6, 2.5)]
        write_grid(samples, options['dump_grid'])
    return {"z": z, "value": estimate.value, "error": estimate.error, "path": options.get('path', 'vertical'),
            "metadata": _metadata(q, n)}, EXIT_OK


def cmd_eisenstein(options: Dict, config: ConfigParser) -> Tuple[Dict, int]:
    r = float(options['r'])
    s = parse_complex(options['s'])
    z = parse_complex(options['z'])
    cutoff = int(options['cutoff'])
    if cutoff < 1:
        raise ValidationError("cutoff必须≥1")
    if not float(r / 2).is_integer():
        raise ValidationError("平凡乘子的Eisenstein级数要求r为偶数, r={}".format(r))
    v = make_multiplier('trivial', r)
    rows = eisenstein_checks(r, v, s, z, cutoff, BeanContainer.get_or_default(FDStencil, FDStencil))
    value = eisenstein_partial(r, v, z, s, cutoff)
    return {"r": r, "s": s, "z": z, "cutoff": cutoff, "value": value, "residuals": rows}, EXIT_OK


def cmd_decompose(options: Dict, config: ConfigParser) -> Tuple[Dict, int]:
    gamma = _matrix(options['gamma'])
    word = decompose_ST(gamma)
    return {"gamma": gamma.to_list(), "word": word, "reconstructed": word_product(word) == gamma}, EXIT_OK


def cmd_check(options: Dict, config: ConfigParser) -> Tuple[Dict, int]:
    workers = options.get('workers')
    if workers is None:
        workers = config.getint('check', 'workers', fallback=4)
    results = run_suites(options['suite'], int(workers))
    rows = [r.to_dict() for r in results]
    if options.get('report'):
        write_report(rows, options['report'])
    passed = all(r.passed for r in results)
    return {"suite": options['suite'], "passed": passed, "checks": rows}, EXIT_OK if passed else EXIT_FAILED


def cmd_laplacian_check(options: Dict, config: ConfigParser) -> Tuple[Dict, int]:
    st = BeanContainer.get_or_default(FDStencil, FDStencil)
    which = options['which']
    z = parse_complex(options['z'])
    if which == 'identity':
        r = 0.5 if options.get('r') is None else float(options['r'])
        F = Sampler(lambda w: np.asarray(w).imag ** (1 / 3) * np.cos(np.asarray(w).real))
        residual = operator_identity_residual(F, r, z, st)
        scale = abs(complex(F(z)))
        passed = residual <= 1e-4 * scale
        return {"which": which, "r": r, "z": z, "residual": residual, "scale": scale, "passed": passed}, \
            EXIT_OK if passed else EXIT_FAILED
    # r是上闭链的权重，y^{(2−r)/2}Δ要求2−r = 12
    r = -10.0 if options.get('r') is None else float(options['r'])
    if abs(2 - r - 12) > 1e-12:
        raise ValidationError("{}检查使用Δ，需要r = −10, 实际为{}".format(which, r))
    k = 2 - r
    F = Sampler(holomorphic_lift(build_delta(), k).func)
    if which == 'eigen':
        expected = r / 2 * (1 - r / 2)
        ratio = -laplacian(F, k, z, st) / complex(F(z))
        residual = abs(ratio - expected) / abs(expected)
        passed = residual <= 1e-4
        return {"which": which, "r": r, "z": z, "eigenvalue": ratio, "expected": expected, "rel_residual": residual,
                "passed": passed}, EXIT_OK if passed else EXIT_FAILED
    residual = abs(maass_lower(F, k, z, st))
    passed = residual <= 1e-6
    return {"which": which, "r": r, "z": z, "residual": residual, "passed": passed}, \
        EXIT_OK if passed else EXIT_FAILED


def cmd_coefficients(options: Dict, config: ConfigParser) -> Tuple[Dict, int]:
    n = _truncation(options, config)
    f = _form(options['f'], n)
    if options.get('out'):
        export_coefficients(f, options['out'])
    frame = coefficients_frame(f)
    return {"form": f.to_dict(), "coefficients": [complex(re, im) for re, im in zip(frame['re'], frame['im'])]}, \
        EXIT_OK


COMMANDS: Dict[str, Callable[[Dict, ConfigParser], Tuple[Dict, int]]] = {
    'pair': cmd_pair,
    'petersson': cmd_petersson,
    'cocycle': cmd_cocycle,
    'aux': cmd_aux,
    'eisenstein': cmd_eisenstein,
    'decompose': cmd_decompose,
    'check': cmd_check,
    'laplacian-check': cmd_laplacian_check,
    'coefficients': cmd_coefficients,
}


@do_log(target_name='dispatch')
def dispatch(command: str, options: Dict, config: ConfigParser) -> Tuple[Dict, int]:
    return COMMANDS[command](options, config)


def run(argv: Sequence[str] = None, config: ConfigParser = None) -> int:
    """
    :return: 退出码，0成功，1检查失败或计算错误，2参数或校验错误，3积分精度未达到或其它数值错误
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_VALIDATION if e.code else EXIT_OK
    try:
        config = config if config else initialize()
        options = resolve_options(args)
        payload, code = dispatch(args.command, options, config)
    except ValidationError as e:
        print("{}: {}".format(type(e).__name__, e), file=sys.stderr)
        return EXIT_VALIDATION
    except ToleranceNotMet as e:
        print(dumps({"error": "ToleranceNotMet", "message": str(e), "value": e.value, "estimate": e.error}))
        return EXIT_TOLERANCE
    except EichlerError as e:
        logging.error("计算失败:{}".format(e))
        print(dumps({"error": type(e).__name__, "message": str(e)}))
        return EXIT_FAILED
    except (ArithmeticError, ValueError) as e:
        # 浮点溢出、除零等未归类的数值错误按精度未达到处理
        logging.error("数值错误:{}".format(e))
        print(dumps({"error": type(e).__name__, "message": str(e)}))
        return EXIT_TOLERANCE
    print(dumps(payload))
    return code


def main():
    sys.exit(run(sys.argv[1:]))
