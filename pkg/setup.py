# Setup

from setuptools import setup, find_packages
from codecs import open
from os import path

__version__ = '0.1'

here = path.abspath(path.dirname(__file__))

# get the dependencies
with open(path.join(here, 'requirements.txt'), encoding='utf-8') as f:
    requirements = f.read().split('\n')

install_requires = [x.strip() for x in requirements if x.strip() and not x.startswith('#')]

setup(
    name='urt_tomo',
    version=__version__,
    description='Ultrasound reflection tomography with ellipse and hyperbola integration curves.',
    license='Apache-2.0',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Programming Language :: Python',
    ],
    keywords='tomography radon abel volterra',
    packages=find_packages(exclude=['tests', 'tests.*']),
    include_package_data=True,
    package_data={'urt_tomo': ['config.json', 'version.json']},
    entry_points={
        'console_scripts': [
            'urt_tomo = urt_tomo.main:main'
        ]
    },
    author='The URT Tomography Tool authors',
    install_requires=install_requires,
)
