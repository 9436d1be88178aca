# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.

import os
import sys
import runpy
import matplotlib
matplotlib.use('agg')

sys.path.insert(0, os.path.abspath('..'))

# -- Project information -----------------------------------------------------

project = 'rwdiff'
copyright = '2026, rwdiff developers'
author = 'rwdiff developers'

# The full version, including alpha/beta/rc tags
release = runpy.run_path(os.path.join('..', 'rwdiff', 'rw_version.py'))['__version__']
version = '.'.join(release.split('.')[:2])


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon',
]

autoclass_content = "both"  # include both class docstring and __init__
autodoc_default_flags = [
        # Make sure that any autodoc declarations show the right members
        "members",
        "inherited-members",
        "show-inheritance",
]
autosummary_generate = True

templates_path = ['_templates']

from recommonmark.parser import CommonMarkParser
source_parsers = {
            '.md': CommonMarkParser,
            }
source_suffix = ['.rst', '.md']

master_doc = 'index'
language = None
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = None


# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
htmlhelp_basename = 'rwdiffdoc'


# -- Options for other outputs -----------------------------------------------

latex_documents = [
    (master_doc, 'rwdiff.tex', 'rwdiff Documentation', author, 'manual'),
]
man_pages = [
    (master_doc, 'rwdiff', 'rwdiff Documentation', [author], 1)
]
epub_title = project
epub_exclude_files = ['search.html']
