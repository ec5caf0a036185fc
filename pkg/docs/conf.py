# -*- coding: utf-8 -*-
from __future__ import unicode_literals

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    'sphinx.ext.autosectionlabel',
]

autodoc_member_order = "bysource"

# Only the docstrings are needed to build the reference
autodoc_mock_imports = ["numpy", "torch", "mpi4py", "yaml", "matplotlib"]

autosummary_generate = True
autosectionlabel_prefix_document = True

source_suffix = '.rst'
master_doc = 'index'
project = 'isacopt'
year = '2026'
author = 'The isacopt developers'
copyright = '{0}, {1}'.format(year, author)
version = release = '0.1.0-dev'

pygments_style = 'trac'

import sphinx_py3doc_enhanced_theme  # noqa: E402
html_theme = "sphinx_py3doc_enhanced_theme"
html_theme_path = [sphinx_py3doc_enhanced_theme.get_html_theme_path()]

html_last_updated_fmt = '%b %d, %Y'
html_sidebars = {
   '**': ['searchbox.html', 'globaltoc.html', 'sourcelink.html'],
}
html_short_title = '%s-%s' % (project, version)

napoleon_numpy_docstring = True
napoleon_google_docstring = False
napoleon_use_ivar = True
napoleon_use_rtype = False
napoleon_use_param = False

intersphinx_mapping = {
    'python': ('https://docs.python.org/3/', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'PyTorch': ('https://pytorch.org/docs/stable/', None),
    'mpi4py': ('https://mpi4py.readthedocs.io/en/stable/', None),
}
