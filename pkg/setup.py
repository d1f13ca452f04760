try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup

import sys
sys.path.insert(0, 'src')
from morita import __version__ as version

description = "dual fusion categories and invertible bimodules from F-symbols"
long_description = """
morita takes skeletal data for a unitary fusion category C acting on a
module category M, builds the annular tube algebra Ann(C, M), decomposes
its representations and assembles the dual category D together with the
mixed associators of the (C, D)-bimodule M.  It also decides whether a
given bimodule category is invertible and explains why when it is not.
"""
platforms = "OS Independent"

keywords = ["fusion category", "F-symbols", "tensor networks",
            "weak Hopf algebra"]
classifiers = [line for line in """

Development Status :: 4 - Beta
Intended Audience :: Science/Research
Operating System :: OS Independent
Programming Language :: Python :: 3
Topic :: Scientific/Engineering :: Mathematics
Topic :: Scientific/Engineering :: Physics

""".split('\n') if line]

setup(description=description,
      long_description=long_description,
      keywords=keywords,
      platforms=platforms,
      classifiers=classifiers,
      license='GPL',
      name='morita',
      version=version,
      zip_safe=False,
      packages=['morita'],
      package_dir={'': 'src'},
      package_data={'morita': ['data/*.json']},
      scripts=['bin/morita'],
      python_requires='>=3.6',
      install_requires=['numpy>=1.17', 'scipy>=1.4'],
      extras_require={'test': ['pytest'],
                      'json': ['simplejson']},
      tests_require=['pytest'],
      )
