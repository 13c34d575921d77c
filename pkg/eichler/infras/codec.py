# 结果的序列化：JSON里的浮点数统一输出17位有效数字，复数输出为[re, im]，表格用pandas写CSV
import json
import math
from fractions import Fraction
from typing import *

import numpy as np
from pandas import DataFrame

from eichler.domain.common import ValidationError


def _float(x: float) -> str:
    if not math.isfinite(x):
        return 'null'
    return format(x, '.17g')


def to_plain(obj):
    """
    把结果对象转换成只包含dict/list/str/int/float/bool/None的结构
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, (float, np.floating, Fraction)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [to_plain(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(x) for x in obj]
    if hasattr(obj, 'to_dict'):
        return to_plain(obj.to_dict())
    raise ValidationError("无法序列化的对象类型:{}".format(type(obj)))


def _encode(obj) -> str:
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, dict):
        return '{' + ', '.join('{}: {}'.format(json.dumps(k), _encode(v)) for k, v in obj.items()) + '}'
    if isinstance(obj, list):
        return '[' + ', '.join(_encode(x) for x in obj) + ']'
    return json.dumps(obj)


def dumps(obj) -> str:
    """
    确定性的JSON输出：键按插入顺序，浮点数17位有效数字
    """
    return _encode(to_plain(obj))


def loads(s: str):
    return json.loads(s)


def parse_complex(value) -> complex:
    """
    接受 "x,y"、[x, y] 或数字
    """
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValidationError("复数需要两个分量: {}".format(value))
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)):
        return complex(value)
    try:
        parts = [float(p) for p in str(value).split(',')]
    except ValueError:
        raise ValidationError("无法解析复数: {}".format(value))
    if len(parts) != 2:
        raise ValidationError("复数的格式为x,y: {}".format(value))
    return complex(parts[0], parts[1])


def write_grid(samples: Iterable[Tuple[complex, complex]], path: str):
    """
    采样点(z, 值)写成x, y, re, im四列的CSV
    """
    rows = [{"x": z.real, "y": z.imag, "re": complex(v).real, "im": complex(v).imag} for z, v in samples]
    DataFrame(rows, columns=["x", "y", "re", "im"]).to_csv(path, index=False, float_format='%.17g')


def write_report(rows: List[Dict], path: str):
    DataFrame(rows, columns=["suite", "name", "passed", "detail"]).to_csv(path, index=False)
