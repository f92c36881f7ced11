try:
    from cx_Freeze import setup, Executable
except ImportError:  # plain setuptools install (e.g. pip install -e .)
    from setuptools import setup
    Executable = None

from setuptools import find_packages

# Dependencies are automatically detected, but it might need
# fine tuning.
build_options = {'packages': ['ratcubics'], 'excludes': ['ratcubics.tests'],
                 'include_files': [('config.ini', 'config.ini')]}

base = 'console'

extra = {}
if Executable is not None:
    extra['options'] = {'build_exe': build_options}
    extra['executables'] = [
        Executable('run_ratcubics.py', base=base, target_name = 'run_ratcubics'),
    ]

setup(name='ratcubics',
      version = '1.0',
      description = 'Invariants, automorphism groups and a height-bounded database of rational cubics',
      packages = find_packages(include=['ratcubics', 'ratcubics.*']),
      py_modules = ['run_ratcubics'],
      install_requires = ['sympy>=1.12', 'numpy>=1.24'],
      **extra)
