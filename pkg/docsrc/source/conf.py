# Sphinx configuration for dialectcxg docs

from pathlib import Path
import sys

ROOT = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(ROOT))

# Version from the package's _version file, without importing the package
dialectcxg_ns = {}
exec((ROOT / 'dialectcxg' / '_version.py').read_text(), dialectcxg_ns)

release = dialectcxg_ns['__version__']
version = release.split('+')[0]

# -- General configuration -----------------------------------------------------

extensions = [
    'sphinx.ext.autosummary',
    'sphinx.ext.intersphinx',
    'sphinx.ext.autodoc',
    'myst_parser',
    'numpydoc',
]

# Class members are listed by the autosummary template instead
numpydoc_show_class_members = False

templates_path = ['_templates']
autosummary_generate = True

source_suffix = ['.rst', '.md']
master_doc = 'index'
exclude_patterns = []

project = 'dialectcxg'
copyright = '2022, dialectcxg developers'

pygments_style = 'sphinx'

# -- HTML output ---------------------------------------------------------------

html_theme = 'pydata_sphinx_theme'
html_theme_options = {
    'search_bar_position': 'sidebar',
}
html_static_path = []
htmlhelp_basename = 'dialectcxgdoc'

# -- Cross-project links -------------------------------------------------------

intersphinx_mapping = {
    'numpy': ('https://numpy.org/doc/stable/', None),
    'pandas': ('https://pandas.pydata.org/pandas-docs/stable/', None),
    'python': ('https://docs.python.org/3', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'sklearn': ('https://scikit-learn.org/stable/', None),
}
