#!/usr/bin/env python

'''
rwdiff simulates relativistic diffusions on Robertson-Walker spacetimes and checks
their long-time behavior (Lyapunov rates, ergodicity, transience, causal-boundary
limits) against what the expansion function predicts.
'''

from setuptools import setup, find_packages
import os
import sys
import runpy

# Get the current folder
cwd = os.path.abspath(os.path.dirname(__file__))

# Define the requirements for core functionality
requirements = [
        'numpy>=1.17',        # Arrays and random streams
        'scipy>=1.4',         # Quadrature, root finding, chi-squared law
        'matplotlib>=3.0',    # Plotting
        'pandas',             # CSV input and output
        'psutil',             # Worker counts and CPU affinity
        'python-Levenshtein', # For fuzzy string matching
        'colorama ; platform_system == "Windows"', # For colored text output -- only install on Windows
        ]

# Optionally define extras
if 'minimal' in sys.argv:
    print('Performing minimal installation -- plotting and fuzzy suggestions will not work')
    sys.argv.remove('minimal')
    requirements = [
        'numpy>=1.17',
        'scipy>=1.4',
        'pandas',
        'psutil',
    ]

# Get version
versionpath = os.path.join(cwd, 'rwdiff', 'rw_version.py')
version = runpy.run_path(versionpath)['__version__']

# Get the documentation
with open(os.path.join(cwd, 'README.md'), "r") as fh:
    long_description = fh.read()

CLASSIFIERS = [
    'Environment :: Console',
    'Intended Audience :: Science/Research',
    'License :: OSI Approved :: MIT License',
    'Operating System :: OS Independent',
    'Programming Language :: Python',
    'Topic :: Scientific/Engineering :: Mathematics',
    'Topic :: Scientific/Engineering :: Physics',
    'Development Status :: 4 - Beta',
    'Programming Language :: Python :: 3.7',
]

setup(
    name='rwdiff',
    version=version,
    description='Relativistic diffusions on Robertson-Walker spacetimes',
    long_description=long_description,
    long_description_content_type="text/markdown",
    keywords=['relativistic diffusion', 'stochastic differential equations', 'cosmology', 'causal boundary'],
    platforms=['OS Independent'],
    classifiers=CLASSIFIERS,
    packages=find_packages(exclude=['tests']),
    include_package_data=True,
    install_requires=requirements,
    entry_points={'console_scripts': ['rwdiff=rwdiff.rw_cli:main']},
)
