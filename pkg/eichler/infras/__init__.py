import logging.config
import os
from configparser import ConfigParser

import yaml

from eichler.domain.common import BeanContainer, ValidationError
from eichler.domain.fundamental_domain import FundamentalDomain, sl2z_domain
from eichler.domain.quadrature import QuadratureSpec
from eichler.domain.spectral import FDStencil

DEFAULT_CONFIG = os.path.join(os.path.dirname(__file__), 'config_default.ini')


def load_config() -> ConfigParser:
    """
    先读包内的默认配置，再读运行目录下的config.ini，用户可以通过config.dir环境变量来覆盖目录
    """
    if not os.getenv("config.dir"):
        config_file = 'config.ini'
    else:
        config_file = "{}/config.ini".format(os.getenv("config.dir"))
    config = ConfigParser()
    config.read([DEFAULT_CONFIG, config_file])
    tol = os.getenv("EICHLER_TOL")
    if tol:
        try:
            if float(tol) <= 0:
                raise ValueError(tol)
        except ValueError:
            raise ValidationError("EICHLER_TOL必须是正数: {}".format(tol))
        config.set('quadrature', 'abs_tol', tol)
    return config


def setup_logging(config: ConfigParser):
    try:
        log_config_file = config.get("log", 'config_file')
    except Exception:
        log_config_file = 'log.yaml'
    if os.getenv("config.dir") and not os.path.isabs(log_config_file):
        candidate = os.path.join(os.getenv("config.dir"), log_config_file)
        log_config_file = candidate if os.path.exists(candidate) else log_config_file
    if os.path.exists(log_config_file):
        with open(log_config_file) as f:
            log_config = yaml.load(f, Loader=yaml.SafeLoader)
        for handler in log_config.get('handlers', {}).values():
            if 'filename' in handler:
                os.makedirs(os.path.dirname(handler['filename']) or '.', exist_ok=True)
        logging.config.dictConfig(log_config)
        logging.info("初始化日志配置成功")
    else:
        logging.basicConfig(level=logging.INFO)
        logging.info("没有log的配置文件,将使用默认配置")


def register_defaults(config: ConfigParser, quadrature: QuadratureSpec = None):
    """
    把默认的积分精度、差分模板和基本域注册到BeanContainer
    """
    BeanContainer.register(QuadratureSpec, quadrature if quadrature else QuadratureSpec.from_config(config))
    BeanContainer.register(FDStencil, FDStencil.from_config(config))
    BeanContainer.register(FundamentalDomain, sl2z_domain())


def initialize() -> ConfigParser:
    config = load_config()
    logging.info("初始化应用配置成功")
    setup_logging(config)
    register_defaults(config)
    logging.info("应用初始化成功")
    return config
