import os
from setuptools import setup, find_packages

### Apps Definition ###
app_package = 'qheis'
release_package = 'qvapp-' + app_package
app_class = 'qheis.app:QHeis'
app_package_dir = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'qvapp', app_package)

### Python Dependencies ###
dependencies = [
    'sympy>=1.9',
    'jsonschema>=4.0',
]

test_dependencies = [
    'pytest>=7.0',
    'hypothesis>=6.0',
]

setup(
    name=release_package,
    version='0.1.0',
    description='Exact truncation-level construction and verification of the rational R-matrix '
                'deformation of the Heisenberg quantum vertex algebra',
    long_description='',
    keywords='quantum vertex algebra, Yang R-matrix, Heisenberg algebra, computer algebra',
    license='MIT',
    packages=find_packages(exclude=['ez_setup', 'examples', 'tests']),
    namespace_packages=['qvapp', 'qvapp.' + app_package],
    include_package_data=True,
    zip_safe=False,
    python_requires='>=3.8',
    install_requires=dependencies,
    extras_require={'test': test_dependencies},
    entry_points={
        'console_scripts': [
            'qheis = qvapp.qheis.cli:main',
        ],
    },
)
