# 该模块放置所有模块都需要的公共解决方案：错误体系、调用日志、锁、全局默认对象容器以及补偿求和
from __future__ import annotations

import logging
import math
import threading
import time
from typing import *


class EichlerError(RuntimeError):
    pass


class ValidationError(EichlerError):
    """
    调用方违反了接口约定
    """
    pass


class NotSL2Z(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NonUnitary(ValidationError):
    pass


class UnsupportedGroup(ValidationError):
    pass


class CuspNotRational(ValidationError):
    pass


class ResonantFrequency(ValidationError):
    pass


class IncompatibleWeights(ValidationError):
    pass


class NonSingularCusp(ValidationError):
    pass


class OutsideConvergence(ValidationError):
    pass


class DomainValidationError(ValidationError):
    def __init__(self, violations: List[str]):
        super().__init__("side pairing不合法: {}".format("; ".join(violations)))
        self.violations = violations


class ZeroBase(EichlerError):
    pass


class NonIntegerOmega(EichlerError):
    pass


class InconsistentMultiplier(EichlerError):
    pass


class SeriesOverflow(EichlerError):
    pass


class TailTooLarge(EichlerError):
    pass


class NoConvergence(EichlerError):
    pass


class ToleranceNotMet(EichlerError):
    def __init__(self, message: str, value: complex = None, error: float = None):
        super().__init__(message)
        self.value = value
        self.error = error


class Divergent(EichlerError):
    pass


class NotPolynomial(EichlerError):
    def __init__(self, message: str, residual: float = None):
        super().__init__(message)
        self.residual = residual


class StencilOutOfDomain(EichlerError):
    pass


class BeanContainer(object):
    beans: Mapping[type, object] = {}

    @classmethod
    def get_or_default(cls, the_type: type, default: Callable[[], object]):
        if the_type in cls.beans:
            return cls.beans[the_type]
        return default()

    @classmethod
    def register(cls, the_type: type, bean: object):
        cls.beans[the_type] = bean


def synchronized(func):
    func.__lock__ = threading.Lock()

    def synced_func(*args, **kws):
        with func.__lock__:
            return func(*args, **kws)

    return synced_func


def compensated_sum(values: Iterable) -> complex:
    """
    实部和虚部分别用math.fsum求和，结果与求和顺序无关
    """
    re_parts = []
    im_parts = []
    for v in values:
        v = complex(v)
        re_parts.append(v.real)
        im_parts.append(v.imag)
    return complex(math.fsum(re_parts), math.fsum(im_parts))


class EscapeParam(object):
    def __init__(self, index: int, key: str, property_name: str = None):
        if not (index >= 0 and key):
            raise RuntimeError("wrong escape param")
        self.index = index
        self.key = key
        self.property_name = property_name


def _summary(obj: object):
    if hasattr(obj, 'to_dict'):
        try:
            return obj.to_dict()
        except Exception:
            return repr(obj)
    if hasattr(obj, '__dict__') and not callable(obj):
        return {k: v for k, v in obj.__dict__.items() if not k.startswith('_')}
    return obj


def build_params_str(*args, **kwargs):
    escape_params: List[EscapeParam] = None
    if 'escape_params' in kwargs:
        escape_params = kwargs.pop('escape_params')
    args_list = [_summary(a) for a in args]
    kwargs_dict = {k: _summary(v) for k, v in kwargs.items()}
    escaped_index = set()
    if escape_params:
        for escape_param in escape_params:
            if escape_param.key in kwargs_dict:
                if escape_param.property_name:
                    v = kwargs_dict[escape_param.key]
                    if isinstance(v, dict):
                        v.pop(escape_param.property_name, None)
                else:
                    kwargs_dict.pop(escape_param.key)
            elif 0 <= escape_param.index < len(args_list):
                if escape_param.property_name:
                    v = args_list[escape_param.index]
                    if isinstance(v, dict):
                        v.pop(escape_param.property_name, None)
                else:
                    escaped_index.add(escape_param.index)
    args_list = [a for i, a in enumerate(args_list) if i not in escaped_index]
    params = {'args': args_list, 'kwargs': kwargs_dict}
    return str(params)


def do_log(target_name: str = None, escape_params: List[EscapeParam] = None):
    def wrapper(func: Callable):
        def inner_wrapper(*args, **kwargs):
            new_kwargs = kwargs.copy()
            new_kwargs['escape_params'] = escape_params
            params_before = build_params_str(*args, **new_kwargs)
            is_exception = False
            exception = None
            ret_obj = None
            start_time = time.time()
            try:
                ret_obj = func(*args, **kwargs)
            except Exception as e:
                exception = e
                is_exception = True

            log_dict = {'params': params_before, "ret_obj": _summary(ret_obj), 'has_exception': is_exception,
                        'rt': time.time() - start_time}
            name = target_name if target_name else func.__name__
            if is_exception:
                log_dict['exception'] = repr(exception)
                logging.error("{}:{}".format(name, log_dict))
            else:
                logging.info("{}:{}".format(name, log_dict))

            if exception:
                raise exception
            else:
                return ret_obj

        inner_wrapper.__name__ = func.__name__
        inner_wrapper.__doc__ = func.__doc__
        return inner_wrapper

    return wrapper
