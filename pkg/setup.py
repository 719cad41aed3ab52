from setuptools import setup, find_packages

name = 'delayctl'
setup(
    version='1.0.0',
    name=name,
    # Only include {name}/, not e.g. tests/
    packages=find_packages(include=(name, name + '.*')),
    install_requires=[
        'attrs',
        'chardet',
        'cvxopt',
        'humanize',
        'numpy>=1',
        'pandas>=1.2',
        'pyyaml',
        'scipy>=1.6',
    ],
    entry_points={
        'console_scripts': ['delayctl = delayctl._cli:main'],
    },
)
