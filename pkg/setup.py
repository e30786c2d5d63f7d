import importlib.util
import os

from setuptools import setup

__author__ = 'The jwa developers'
__contact__ = 'jwa-dev@users.noreply.github.com'
__url__ = 'https://github.com/jwa-dev/jwa'


def import_path(module_name, path):
    spec = importlib.util.spec_from_file_location(module_name, path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


CUR_PATH = os.path.abspath(os.path.dirname(__file__))
_version_mod_path = os.path.join(CUR_PATH, 'jwa', '_version.py')
_version_mod = import_path('_version', _version_mod_path)
__version__ = _version_mod.__version__


with open('README.md', encoding='utf8') as read_me:
    long_description = read_me.read()

setup(name='jwa',
      version=__version__,
      description="k-ary GCD reduction and the exact worst case of its reduction loop.",
      long_description=long_description,
      long_description_content_type='text/markdown',
      author=__author__,
      author_email=__contact__,
      url=__url__,
      packages=['jwa', 'jwa.test'],
      python_requires='>=3.8',
      install_requires=['boltons>=21.0.0', 'attrs', 'face>=20.1.1', 'sympy>=1.9'],
      entry_points={'console_scripts': ['jwa = jwa.cli:console_main']},
      include_package_data=True,
      zip_safe=False,
      platforms='any',
      classifiers=[
          'Topic :: Scientific/Engineering :: Mathematics',
          'Intended Audience :: Science/Research',
          'Topic :: Software Development :: Libraries',
          'Development Status :: 3 - Alpha',
          'Programming Language :: Python :: 3.8',
          'Programming Language :: Python :: 3.9',
          'Programming Language :: Python :: 3.10',
          'Programming Language :: Python :: 3.11',
          'Programming Language :: Python :: 3.12',
          'Programming Language :: Python :: Implementation :: CPython',
          'Programming Language :: Python :: Implementation :: PyPy',
      ]
     )

"""
A brief checklist for release:

* tox
* git commit (if applicable)
* Bump jwa/_version.py off of -dev
* git commit -a -m "bump version for vx.y.z release"
* write CHANGELOG
* bump docs/conf.py version
* git commit
* rm -rf dist/*
* python setup.py sdist bdist_wheel
* twine upload dist/*
* git tag -a vx.y.z -m "brief summary"
* bump jwa/_version.py onto n+1 dev
* git commit
* git push

"""
