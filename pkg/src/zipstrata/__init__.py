"""Zip data, their orbit stratifications, and a finite-field oracle for ``GL_n``.

Subpackages: :mod:`zipstrata.rootdata` (root systems and Weyl groups),
:mod:`zipstrata.parabolic` (cosets and Bruhat order), :mod:`zipstrata.zipcomb`
(the closure order on ``^J W``) and :mod:`zipstrata.finitezip` (enumeration
over finite fields).
"""

__version__ = "0.1.0"
