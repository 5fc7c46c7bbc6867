#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# migration-balancer documentation build configuration file.

import os
import sys

docs_dir = os.path.dirname(__file__)
root_dir = os.path.realpath(os.path.join(docs_dir, '..'))
sys.path.insert(0, root_dir)

import migration_balancer  # noqa: E402

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.todo',
]

todo_include_todos = True

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = 'migration-balancer'
copyright = 'migration-balancer developers'

version = migration_balancer.__version__
release = migration_balancer.__version__

exclude_patterns = ['_build']

pygments_style = 'sphinx'

autodoc_member_order = 'bysource'

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'

htmlhelp_basename = 'migration_balancer_doc'

# -- Options for manual page output ---------------------------------------

man_pages = [
    ('index', 'migration-balancer', 'migration-balancer Documentation',
     ['migration-balancer developers'], 1)
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3/', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
}
