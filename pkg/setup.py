import pathlib
from setuptools import setup, find_packages
from distutils.util import convert_path

# Get the version from the _version file within the package directory
dialectcxg_ns = {}
version_path = convert_path('dialectcxg/_version.py')
with open(version_path) as f:
    exec(f.read(), dialectcxg_ns)

# The directory containing this file
HERE = pathlib.Path(__file__).parent

# The text of the README file
README = (HERE / "README.md").read_text()

# Set 'er up
setup(
    name='dialectcxg',
    packages=find_packages(exclude=['tests', 'tests.*']),
    package_data={'dialectcxg': ['data/*']},
    version=dialectcxg_ns['__version__'],
    license='MIT',
    description='Dialect identification with construction grammar features',
    long_description=README,
    long_description_content_type="text/markdown",
    keywords=['dialect identification', 'construction grammar',
              'national varieties', 'text classification'],
    python_requires='>=3.10',
    install_requires=[
        'awkward>=1.8.0',
        'numpy>=1.22.4',
        'pandas>=1.4.2',
        'scipy>=1.9.3',
        'scikit-learn>=1.1',
        'beautifulsoup4>=4.11',
        'PyYAML>=6.0',
        'tqdm>=4.64',
    ],
    entry_points={
        'console_scripts': ['dialectcxg=dialectcxg.cli:main'],
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Topic :: Text Processing :: Linguistic',
    ],
)
