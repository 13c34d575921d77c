from setuptools import setup, find_packages

with open('requirements.txt') as f:
    requirements = [line.strip() for line in f if line.strip()]

setup(
    name='eichler-engine',
    version='0.1.0',
    packages=find_packages(exclude=['test', 'test.*']),
    package_data={'eichler.infras': ['config_default.ini']},
    install_requires=requirements,
    entry_points={'console_scripts': ['eichler=eichler.service.cli:main']},
)
