import os
import sys
sys.path.insert(0, os.path.abspath('../../'))

project = 'Quermass'
copyright = '2026, The Quermass developers'
author = 'The Quermass developers'
release = '0.1.0'

# -- General configuration ---------------------------------------------------
# https://www.sphinx-doc.org/en/master/usage/configuration.html#general-configuration

add_module_names = False
extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
]

templates_path = ['_templates']
exclude_patterns = []

autodoc_member_order = 'bysource'
autodoc_preserve_defaults = True


# -- Options for HTML output -------------------------------------------------
# https://www.sphinx-doc.org/en/master/usage/configuration.html#options-for-html-output

html_theme = 'press'
html_static_path = ['_static']
html_sidebars = {'**': ['util/searchbox.html', 'util/sidetoc.html']}
